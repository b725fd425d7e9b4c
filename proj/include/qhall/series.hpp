#ifndef QHALL_SERIES_HPP
#define QHALL_SERIES_HPP

/**
 * Graded series in twisted polynomial algebras.
 *
 * A key is a flattened tuple of t dimension vectors (t = arity, each of
 * length n); group 0 is the innermost subobject slot, group t-1 the outer
 * quotient slot.  Multiplication twists come from a pluggable TwistRule:
 * the product of monomials with keys L, R is v^twist_vexp(L,R) * (L+R).
 *
 * Rules provided:
 *  - untwisted:      commutative, twist 0 (lambda-ring operations live here)
 *  - char:t:         t-fold Hall character twist  prod_{i>=j} <L_i,R_j>^(-1)
 *  - antisym:        t^a t^b = q^((<b,a>-<a,b>)/2) t^(a+b)
 *  - cluster:        x^a1 y^b1 * x^a2 y^b2 = q^((b1.a2-a1.b2)/2) (b1,b2)^(1/2) ...
 *
 * Characters of the Hall algebra land here: char_integral (r_alpha x^alpha),
 * char_integral_delta (Grassmannian splittings), char_integral_delta_t
 * (flag splittings); each is the image of chi_alpha, the sum of all
 * representation classes of dimension alpha.
 */

#include "qhall/exactq.hpp"
#include "qhall/quiver.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qhall {

using SeriesKey = std::vector<int>;

class TwistRule {
 public:
  virtual ~TwistRule() = default;
  virtual std::string id() const = 0;
  virtual int arity() const = 0;       // number of key groups
  virtual int group_size() const = 0;  // entries per group
  // exponent of v in the twist applied when multiplying L * R
  virtual long long twist_vexp(const SeriesKey& L, const SeriesKey& R) const = 0;
  // grading degree used for truncation (default: sum of all entries)
  virtual long long degree(const SeriesKey& k) const;
  virtual void validate_key(const SeriesKey& k) const;
  int key_size() const { return arity() * group_size(); }
};

using TwistRulePtr = std::shared_ptr<const TwistRule>;

TwistRulePtr make_untwisted_rule(int n);
TwistRulePtr make_char_rule(const Quiver& q, int t);  // t >= 1
TwistRulePtr make_antisym_rule(const Quiver& q);
TwistRulePtr make_cluster_rule(const std::vector<std::vector<int>>& B);

class GradedSeries {
 public:
  GradedSeries(TwistRulePtr rule, long long truncation);
  static GradedSeries unit(TwistRulePtr rule, long long truncation);

  const TwistRulePtr& rule() const { return rule_; }
  long long truncation() const { return truncation_; }
  const std::map<SeriesKey, QRat>& terms() const { return terms_; }

  QRat coeff(const SeriesKey& k) const;
  // inserts (or erases on zero); keys beyond the truncation are dropped
  void set_coeff(const SeriesKey& k, const QRat& c);
  void add_coeff(const SeriesKey& k, const QRat& c);

  bool operator==(const GradedSeries& o) const;
  bool operator!=(const GradedSeries& o) const { return !(*this == o); }

  GradedSeries operator+(const GradedSeries& o) const;
  GradedSeries operator-(const GradedSeries& o) const;
  GradedSeries operator*(const GradedSeries& o) const;  // twisted product
  GradedSeries scaled(const QRat& c) const;

  // multiplicative inverse to the truncation; the constant term must be
  // invertible.  The result is a two-sided inverse for graded twists.
  GradedSeries inverse() const;

  // substitute q -> q^n and key -> n*key; untwisted rule only
  GradedSeries adams(unsigned n) const;

  // reinterpret the same terms under another rule (key shapes must match)
  GradedSeries with_rule(TwistRulePtr new_rule) const;
  GradedSeries truncated(long long new_truncation) const;
  // terms of grading degree d as a standalone series
  GradedSeries graded_piece(long long d) const;
  long long max_degree() const;

  // coefficientwise evaluation at integer powers of q
  std::map<SeriesKey, BigRat> eval_q(const BigInt& q0) const;

  std::string to_json() const;
  static GradedSeries from_json(const std::string& text, TwistRulePtr rule);

 private:
  TwistRulePtr rule_;
  long long truncation_;
  std::map<SeriesKey, QRat> terms_;  // invariant: no zero coefficients
};

// r_alpha(q) = |Rep_alpha| / |GL_alpha| = q^rep_dim / prod_v |GL_{alpha_v}|
QRat rep_class_mass(const Quiver& q, const DimVector& alpha);

// image of chi_alpha under the single character: r_alpha x^alpha
GradedSeries char_integral(const Quiver& q, const DimVector& alpha);
// double character: sum over beta+gamma = alpha of <beta,gamma>^(-1)
// r_beta r_gamma x^beta y^gamma (key = [gamma | beta], sub slot first)
GradedSeries char_integral_delta(const Quiver& q, const DimVector& alpha);
// t-fold character: sum over ordered t-part compositions with twist
// prod_{i>j} <part_i, part_j>^(-1); key = [part_1 | ... | part_t],
// part_1 the innermost subobject
GradedSeries char_integral_delta_t(const Quiver& q, const DimVector& alpha, int t);

// compositions of alpha into t ordered nonnegative parts
std::vector<std::vector<DimVector>> compositions_t(const DimVector& alpha, int t);

SeriesKey flatten_key(const std::vector<DimVector>& parts);
std::vector<DimVector> split_key(const SeriesKey& k, int t);

}  // namespace qhall

#endif
