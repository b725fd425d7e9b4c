#ifndef QHALL_CLUSTER_HPP
#define QHALL_CLUSTER_HPP

/**
 * Quantum cluster variables with principal coefficients.
 *
 * A PrincipalFrame fixes an acyclic quiver with Euler matrix E and works in
 * the double quantum Laurent algebra on monomials x^a y^b (a in Z^n Laurent,
 * b in N^n), multiplied by
 *
 *   (x^{a1} y^{b1})(x^{a2} y^{b2})
 *       = v^(b1.a2 - a1.b2 + b1 B b2^T) x^{a1+a2} y^{b1+b2},
 *
 * where B = E - E^T.  This is the quantum torus attached to the form
 * Lambda = [[0, I], [-I, -B]]; the extended matrix (B, I) is unitally
 * compatible with it, -(B, I) Lambda = (I, 0), and the constructor
 * recomputes that product and rejects anything else.
 *
 * The cluster variable of a module T with dim T = alpha is
 *
 *   X(T) = sum_{0 <= gamma <= alpha} v^(-<gamma, alpha - gamma>)
 *              |Gr_gamma(T)| x^(g(alpha) - phi(gamma)) y^(alpha - gamma),
 *
 * with g(alpha) = -alpha E^T and phi(gamma) = gamma B.  The Grassmannian
 * counts arrive as a table gamma -> VPoly: counting polynomials from the
 * moduli engine (rigid_grassmannian_table, valid for the generic rigid
 * module of its dimension) or plain integers counted by the oracle on one
 * explicit representation (oracle_grassmannian_table).
 *
 * Products expand over extension middle terms with no prefactor in the
 * principal frame:
 *
 *   X(U) X(V) = sum_[W] (|Ext(U, V)_W| / |Ext(U, V)|) X(W),
 *
 * where Ext(U, V) classifies sequences 0 -> V -> W -> U -> 0.  When the
 * tables hold counts at a fixed prime p the two sides agree only after
 * v -> sqrt(p), so verify_cluster_multiplication compares coefficients
 * exactly in Q(sqrt(p)).
 */

#include "qhall/exactq.hpp"
#include "qhall/oracle.hpp"
#include "qhall/quiver.hpp"
#include "qhall/series.hpp"

#include <map>
#include <string>
#include <vector>

namespace qhall {

class CountCache;  // count.hpp

class PrincipalFrame {
 public:
  // principal quantization Lambda = [[0, I], [-I, -B]]
  explicit PrincipalFrame(const Quiver& q);
  // caller-supplied antisymmetric 2n x 2n form, subject to the same
  // compatibility -(B, I) Lambda = (I, 0); provided for completeness, only
  // the principal constructor is exercised beyond validation
  PrincipalFrame(const Quiver& q, const std::vector<std::vector<long long>>& lambda);

  const Quiver& quiver() const { return quiver_; }
  const std::vector<std::vector<int>>& b_matrix() const { return B_; }
  const TwistRulePtr& rule() const { return rule_; }
  // identifies the algebra (quiver and twist) for frame-match checks
  const std::string& signature() const { return signature_; }

  DimVector g(const DimVector& alpha) const;    // -alpha E^T
  DimVector phi(const DimVector& gamma) const;  // gamma B

 private:
  void init(const Quiver& q, const std::vector<std::vector<long long>>& lambda);

  Quiver quiver_;
  std::vector<std::vector<int>> B_;
  TwistRulePtr rule_;
  std::string signature_;
};

// finite element of the double quantum Laurent algebra of one frame;
// keys are [x-part | y-part], coefficients Laurent in v
class ClusterElement {
 public:
  ClusterElement(const PrincipalFrame& frame, GradedSeries series);
  static ClusterElement one(const PrincipalFrame& frame);

  const GradedSeries& series() const { return series_; }
  const std::string& frame_signature() const { return frame_; }

  // same frame and the same terms; truncation bookkeeping is ignored
  bool operator==(const ClusterElement& o) const;
  bool operator!=(const ClusterElement& o) const { return !(*this == o); }

  ClusterElement operator+(const ClusterElement& o) const;
  ClusterElement operator*(const ClusterElement& o) const;  // twisted product
  ClusterElement scaled(const QRat& c) const;

  std::string str() const;  // Laurent polynomial in x_1..x_n, y_1..y_n
  std::string to_json() const;

 private:
  ClusterElement(std::string frame, GradedSeries series);

  std::string frame_;
  GradedSeries series_;
};

// X(T) from a complete table gamma -> |Gr_gamma(T)|; every 0 <= gamma <=
// alpha must be present (zero entries included)
ClusterElement cluster_variable(const PrincipalFrame& frame, const DimVector& alpha,
                                const std::map<DimVector, VPoly>& grc);

// product in the double quantum Laurent algebra; frames must match
ClusterElement cluster_product(const ClusterElement& a, const ClusterElement& b);

// coefficientwise equality after v -> sqrt(q0); q0 must not be a square
bool cluster_equal_at(const ClusterElement& a, const ClusterElement& b, const BigInt& q0);

// |Gr_gamma(T)| of one explicit representation, as constant polynomials
std::map<DimVector, VPoly> oracle_grassmannian_table(const FpRep& T, OracleBudget& budget);

// Counting polynomials |Gr_gamma(T)| for the generic rigid module T of
// dimension alpha, from the moduli engine under a stabilizing weight that
// must isolate T.  The weight is validated three ways: coprime_check, the
// normalized moduli count being exactly 1, and an oracle spot check at
// p = 2 (unique semistable class, rigid, and every table entry equal to
// its brute-force Grassmannian count).
std::map<DimVector, VPoly> rigid_grassmannian_table(const Quiver& q, const Stability& st,
                                                    const DimVector& alpha,
                                                    CountCache* cache = nullptr);

// Checks X(U) X(V) = sum_[W] (|Ext(U,V)_W| / |Ext(U,V)|) X(W) at q = p:
// the left side from oracle Grassmannian tables of U and V, the right side
// from ext_middle_distribution, compared in Q(sqrt(p)).
bool verify_cluster_multiplication(const PrincipalFrame& frame, const FpRep& U,
                                   const FpRep& V, OracleBudget& budget);

}  // namespace qhall

#endif
