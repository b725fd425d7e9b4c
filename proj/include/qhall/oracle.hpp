#ifndef QHALL_ORACLE_HPP
#define QHALL_ORACLE_HPP

/**
 * Brute-force ground truth over small prime fields.
 *
 * Everything here enumerates: representations, group elements, subspaces.
 * The point is independence from the generating-series engine, so results
 * can be compared coefficient by coefficient at q = p.  All entry points
 * charge an OracleBudget and throw BudgetError once the configured work
 * limit is exceeded, so accidental combinatorial explosions fail fast.
 */

#include "qhall/exactq.hpp"
#include "qhall/quiver.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace qhall {

class OracleBudget {
 public:
  explicit OracleBudget(long long limit);
  // QHALL_ORACLE_BUDGET, default 2^24
  static OracleBudget from_env();
  void charge(long long cost);
  long long used() const { return used_; }
  long long limit() const { return limit_; }

 private:
  long long limit_;
  long long used_;
};

struct FpMat {
  int rows = 0, cols = 0;
  std::vector<uint8_t> a;  // row-major, entries in [0, p)

  static FpMat zero(int r, int c);
  static FpMat identity(int n);
  static FpMat from_rows(const std::vector<std::vector<int>>& rows, int p);
  uint8_t& at(int r, int c) { return a[(size_t)r * cols + c]; }
  uint8_t at(int r, int c) const { return a[(size_t)r * cols + c]; }
  bool operator==(const FpMat& o) const = default;
};

FpMat fp_mul(const FpMat& x, const FpMat& y, int p);
FpMat fp_add(const FpMat& x, const FpMat& y, int p);
FpMat fp_sub(const FpMat& x, const FpMat& y, int p);
int fp_rref(FpMat& m, int p);            // in place; returns rank
int fp_rank(FpMat m, int p);
FpMat fp_kernel(const FpMat& m, int p);  // rows span the right kernel
FpMat fp_inverse(const FpMat& m, int p); // throws on singular input
// v assumed reduced against nothing; rref must be in row-reduced form
bool fp_in_rowspace(const FpMat& rref, std::vector<uint8_t> v, int p);

struct FpRep {
  const Quiver* quiver = nullptr;
  int p = 0;
  DimVector dim;
  std::vector<FpMat> mats;  // mats[a]: dim[head(a)] x dim[tail(a)]
  bool operator==(const FpRep& o) const {
    return p == o.p && dim == o.dim && mats == o.mats;
  }
};

FpRep zero_rep(const Quiver& q, const DimVector& alpha, int p);
FpRep direct_sum(const FpRep& x, const FpRep& y);
long long rep_entry_count(const Quiver& q, const DimVector& alpha);
// mixed-radix bijection between [0, p^entries) and Rep_alpha(F_p)
FpRep decode_rep(const Quiver& q, const DimVector& alpha, int p, long long index);
long long encode_rep(const FpRep& m);

// |GL_n(F_p)| by the product formula
BigInt gl_count(int n, int p);
// materialized group elements with aligned inverses; throws when p^(n^2)
// exceeds the enumeration cap
const std::vector<FpMat>& gl_elements(int n, int p);
const std::vector<FpMat>& gl_element_inverses(int n, int p);
// all k-dimensional subspaces of F_p^n as k x n RREF basis matrices
const std::vector<FpMat>& subspaces(int n, int k, int p);

int hom_dim(const FpRep& a, const FpRep& b);
int ext_dim(const FpRep& a, const FpRep& b);
// basis of Hom(a, b) as per-vertex matrix tuples phi[v]: a_v -> b_v
std::vector<std::vector<FpMat>> hom_basis(const FpRep& a, const FpRep& b);
bool is_isomorphic(const FpRep& a, const FpRep& b, OracleBudget& budget);
bool is_indecomposable(const FpRep& m, OracleBudget& budget);

struct IsoClasses {
  std::vector<FpRep> reps;
  std::vector<BigInt> aut_sizes;
  BigInt gl_size;
};
IsoClasses iso_classes(const Quiver& q, const DimVector& alpha, int p,
                       OracleBudget& budget);
int find_class(const IsoClasses& classes, const FpRep& m, OracleBudget& budget);

struct SubRep {
  std::vector<FpMat> basis;  // basis[v]: gamma_v x alpha_v in RREF
  DimVector dim;
};
std::vector<SubRep> subreps_of_dim(const FpRep& m, const DimVector& gamma,
                                   OracleBudget& budget);
std::vector<SubRep> all_subreps(const FpRep& m, OracleBudget& budget);
bool subrep_contains(const SubRep& inner, const SubRep& outer, int p);
FpRep restrict_to(const FpRep& m, const SubRep& u);
FpRep quotient_by(const FpRep& m, const SubRep& u);

BigInt grassmannian_count(const FpRep& m, const DimVector& gamma,
                          OracleBudget& budget);
// parts are subquotient dimensions, innermost first; counts chains
// 0 <= F_1 <= ... <= F_t = m with dim(F_i/F_{i-1}) = parts[i-1]
BigInt flag_count(const FpRep& m, const std::vector<DimVector>& parts,
                  OracleBudget& budget);

bool is_semistable(const FpRep& m, const Stability& sigma, OracleBudget& budget);
bool is_stable(const FpRep& m, const Stability& sigma, OracleBudget& budget);
// stable with End = F_p, i.e. stable after any scalar extension
bool is_absolutely_stable(const FpRep& m, const Stability& sigma, OracleBudget& budget);

// stack masses: sum of weight/|Aut M| over iso classes M of dimension alpha,
// restricted to sigma-semistables when sigma is given
BigRat free_mass(const Quiver& q, const DimVector& alpha, int p, OracleBudget& budget);
BigRat semistable_mass(const Quiver& q, const Stability& sigma, const DimVector& alpha,
                       int p, OracleBudget& budget);
BigRat grassmannian_mass(const Quiver& q, const std::optional<Stability>& sigma,
                         const DimVector& alpha, const DimVector& gamma, int p,
                         OracleBudget& budget);
BigRat flag_mass(const Quiver& q, const std::optional<Stability>& sigma,
                 const DimVector& alpha, const std::vector<DimVector>& parts,
                 int p, OracleBudget& budget);
BigInt stable_class_count(const Quiver& q, const Stability& sigma, const DimVector& alpha,
                          int p, bool absolutely, OracleBudget& budget);

// F^m_{a,b} = #{U <= m : U iso b, m/U iso a}
BigInt hall_number(const FpRep& m, const FpRep& a, const FpRep& b,
                   OracleBudget& budget);
// how the classes of Ext^1(a, b) distribute over middle-term iso classes;
// keys are indices into classes (which must cover dim a + dim b)
std::map<int, BigInt> ext_middle_distribution(const FpRep& a, const FpRep& b,
                                              const IsoClasses& classes,
                                              OracleBudget& budget);

// sum of (-1)^s over strict chains 0 = L_0 < L_1 < ... < L_s = m whose
// intermediate terms all satisfy the predicate
BigInt filtration_alt_sum(const FpRep& m,
                          const std::function<bool(const FpRep&)>& admissible,
                          OracleBudget& budget);

}  // namespace qhall

#endif
