#include "qhall/cluster.hpp"

#include "qhall/count.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <set>
#include <sstream>
#include <utility>

namespace qhall {

namespace {

// unital compatibility of the extended exchange matrix: -(B, I) Lambda = (I, 0)
void check_compatible(const std::vector<std::vector<int>>& B,
                      const std::vector<std::vector<long long>>& lam) {
  const int n = (int)B.size();
  if ((int)lam.size() != 2 * n) throw Error("cluster form has wrong size");
  for (const auto& row : lam)
    if ((int)row.size() != 2 * n) throw Error("cluster form is not square");
  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j < 2 * n; ++j)
      if (lam[i][j] != -lam[j][i]) throw Error("cluster form is not antisymmetric");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 2 * n; ++j) {
      // row i of (B, I) times column j of Lambda
      long long s = lam[n + i][j];
      for (int k = 0; k < n; ++k) s += (long long)B[i][k] * lam[k][j];
      if (-s != (j == i ? 1 : 0)) throw Error("cluster form is not unitally compatible");
    }
  }
}

std::vector<std::vector<long long>> principal_lambda(const std::vector<std::vector<int>>& B) {
  const int n = (int)B.size();
  std::vector<std::vector<long long>> lam(2 * n, std::vector<long long>(2 * n, 0));
  for (int i = 0; i < n; ++i) {
    lam[i][n + i] = 1;
    lam[n + i][i] = -1;
    for (int j = 0; j < n; ++j) lam[n + i][n + j] = -B[i][j];
  }
  return lam;
}

// x^{c1} x^{c2} = v^(-c1 Lambda c2^T) x^{c1+c2} on keys [x-part | y-part];
// for the principal Lambda this reproduces the cluster rule exactly
class LambdaRule : public TwistRule {
 public:
  explicit LambdaRule(std::vector<std::vector<long long>> lam) : lam_(std::move(lam)) {
    n_ = (int)lam_.size() / 2;
  }
  std::string id() const override {
    std::ostringstream os;
    os << "cluster-form:" << n_;
    for (const auto& row : lam_)
      for (long long e : row) os << ":" << e;
    return os.str();
  }
  int arity() const override { return 2; }
  int group_size() const override { return n_; }
  long long twist_vexp(const SeriesKey& L, const SeriesKey& R) const override {
    long long e = 0;
    for (int i = 0; i < 2 * n_; ++i)
      for (int j = 0; j < 2 * n_; ++j) e += (long long)L[i] * lam_[i][j] * R[j];
    return -e;
  }
  long long degree(const SeriesKey& k) const override {
    long long d = 0;
    for (int i = 0; i < n_; ++i) d += k[n_ + i];
    return d;
  }
  void validate_key(const SeriesKey& k) const override {
    if ((int)k.size() != 2 * n_) throw Error("cluster key has wrong size");
    for (int i = 0; i < n_; ++i)
      if (k[n_ + i] < 0) throw Error("cluster key y-part entry is negative");
  }

 private:
  std::vector<std::vector<long long>> lam_;
  int n_;
};

void check_dim(const PrincipalFrame& frame, const DimVector& a, const char* what) {
  if ((int)a.size() != frame.quiver().num_vertices())
    throw Error(std::string(what) + " has wrong length");
  if (!dim_nonneg(a)) throw Error(std::string(what) + " has a negative entry");
}

}  // namespace

PrincipalFrame::PrincipalFrame(const Quiver& q) { init(q, {}); }

PrincipalFrame::PrincipalFrame(const Quiver& q,
                               const std::vector<std::vector<long long>>& lambda) {
  init(q, lambda);
}

void PrincipalFrame::init(const Quiver& q, const std::vector<std::vector<long long>>& lambda) {
  if (!q.is_acyclic()) throw Error("cluster frame requires an acyclic quiver");
  quiver_ = q;
  const int n = q.num_vertices();
  const auto& E = q.euler_matrix();
  B_.assign(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B_[i][j] = E[i][j] - E[j][i];
  const auto principal = principal_lambda(B_);
  const auto& lam = lambda.empty() ? principal : lambda;
  check_compatible(B_, lam);
  if (lam == principal)
    rule_ = make_cluster_rule(B_);
  else
    rule_ = std::make_shared<LambdaRule>(lam);
  signature_ = quiver_.canonical_string() + "|" + rule_->id();
}

DimVector PrincipalFrame::g(const DimVector& alpha) const {
  check_dim(*this, alpha, "dimension vector");
  const int n = quiver_.num_vertices();
  const auto& E = quiver_.euler_matrix();
  DimVector r(n, 0);
  for (int i = 0; i < n; ++i) {
    long long s = 0;
    for (int j = 0; j < n; ++j) s += (long long)alpha[j] * E[i][j];
    r[i] = (int)-s;
  }
  return r;
}

DimVector PrincipalFrame::phi(const DimVector& gamma) const {
  check_dim(*this, gamma, "dimension vector");
  const int n = quiver_.num_vertices();
  DimVector r(n, 0);
  for (int j = 0; j < n; ++j) {
    long long s = 0;
    for (int i = 0; i < n; ++i) s += (long long)gamma[i] * B_[i][j];
    r[j] = (int)s;
  }
  return r;
}

ClusterElement::ClusterElement(const PrincipalFrame& frame, GradedSeries series)
    : frame_(frame.signature()), series_(std::move(series)) {
  if (series_.rule()->id() != frame.rule()->id())
    throw Error("cluster element series does not match its frame");
}

ClusterElement::ClusterElement(std::string frame, GradedSeries series)
    : frame_(std::move(frame)), series_(std::move(series)) {}

ClusterElement ClusterElement::one(const PrincipalFrame& frame) {
  return ClusterElement(frame, GradedSeries::unit(frame.rule(), 0));
}

bool ClusterElement::operator==(const ClusterElement& o) const {
  return frame_ == o.frame_ && series_.terms() == o.series_.terms();
}

ClusterElement ClusterElement::operator+(const ClusterElement& o) const {
  if (frame_ != o.frame_) throw Error("cluster elements live in different frames");
  long long t = std::max(series_.truncation(), o.series_.truncation());
  return ClusterElement(frame_, series_.truncated(t) + o.series_.truncated(t));
}

ClusterElement ClusterElement::operator*(const ClusterElement& o) const {
  if (frame_ != o.frame_) throw Error("cluster elements live in different frames");
  // every term survives: the y-grading of a product is at most the sum
  long long t = series_.truncation() + o.series_.truncation();
  return ClusterElement(frame_, series_.truncated(t) * o.series_.truncated(t));
}

ClusterElement ClusterElement::scaled(const QRat& c) const {
  return ClusterElement(frame_, series_.scaled(c));
}

std::string ClusterElement::str() const {
  if (series_.terms().empty()) return "0";
  const int n = series_.rule()->group_size();
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : series_.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (int i = 0; i < 2 * n; ++i) {
      if (k[i] == 0) continue;
      os << " " << (i < n ? "x" : "y") << (i % n) + 1;
      if (k[i] != 1) os << "^" << k[i];
    }
  }
  return os.str();
}

std::string ClusterElement::to_json() const {
  const int n = series_.rule()->group_size();
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, c] : series_.terms()) {
    nlohmann::json t;
    t["x"] = std::vector<int>(k.begin(), k.begin() + n);
    t["y"] = std::vector<int>(k.begin() + n, k.end());
    t["coeff"] = c.str();
    terms.push_back(std::move(t));
  }
  nlohmann::json j;
  j["rule"] = series_.rule()->id();
  j["terms"] = std::move(terms);
  return j.dump();
}

ClusterElement cluster_variable(const PrincipalFrame& frame, const DimVector& alpha,
                                const std::map<DimVector, VPoly>& grc) {
  check_dim(frame, alpha, "dimension vector");
  const int n = frame.quiver().num_vertices();
  GradedSeries s(frame.rule(), dim_total(alpha));
  const DimVector g = frame.g(alpha);
  for (const DimVector& gamma : subvectors(alpha)) {
    auto it = grc.find(gamma);
    if (it == grc.end()) {
      std::ostringstream os;
      os << "grassmannian table is missing gamma =";
      for (int e : gamma) os << " " << e;
      throw Error(os.str());
    }
    if (it->second.is_zero()) continue;
    const DimVector beta = dim_sub(alpha, gamma);
    const DimVector x = dim_sub(g, frame.phi(gamma));
    SeriesKey key(2 * n);
    for (int i = 0; i < n; ++i) {
      key[i] = x[i];
      key[n + i] = beta[i];
    }
    long long e = frame.quiver().euler_form(gamma, beta);
    // <gamma, beta>^(-1/2) = v^(-<gamma, beta>)
    s.add_coeff(key, QRat(it->second * VPoly::vpow((int)-e)));
  }
  return ClusterElement(frame, std::move(s));
}

ClusterElement cluster_product(const ClusterElement& a, const ClusterElement& b) {
  return a * b;
}

bool cluster_equal_at(const ClusterElement& a, const ClusterElement& b, const BigInt& q0) {
  if (a.frame_signature() != b.frame_signature())
    throw Error("cluster elements live in different frames");
  std::set<SeriesKey> keys;
  for (const auto& [k, c] : a.series().terms()) keys.insert(k);
  for (const auto& [k, c] : b.series().terms()) keys.insert(k);
  for (const SeriesKey& k : keys)
    if (a.series().coeff(k).eval_v(q0) != b.series().coeff(k).eval_v(q0)) return false;
  return true;
}

std::map<DimVector, VPoly> oracle_grassmannian_table(const FpRep& T, OracleBudget& budget) {
  std::map<DimVector, VPoly> out;
  for (const DimVector& gamma : subvectors(T.dim))
    out[gamma] = VPoly(grassmannian_count(T, gamma, budget));
  return out;
}

std::map<DimVector, VPoly> rigid_grassmannian_table(const Quiver& q, const Stability& st,
                                                    const DimVector& alpha,
                                                    CountCache* cache) {
  validate_stability(q, st);
  if ((int)alpha.size() != q.num_vertices() || !dim_nonneg(alpha) || dim_is_zero(alpha))
    throw Error("rigid table needs a nonzero nonnegative dimension vector");
  if (!coprime_check(q, st, alpha))
    throw Error("stabilizing weight is not coprime at the target dimension");
  CountResult m = moduli_count(q, st, alpha, cache);
  if (!m.normalized || *m.normalized != VPoly(1))
    throw Error("stabilizing weight does not isolate a unique stable class");
  std::map<DimVector, VPoly> out;
  for (const DimVector& gamma : subvectors(alpha)) {
    CountResult c = grassmannian_moduli_count(q, st, alpha, gamma, cache);
    if (!c.normalized)
      throw Error("grassmannian count did not normalize to a polynomial");
    out[gamma] = *c.normalized;
  }
  // oracle spot check at p = 2: the weight isolates one semistable class,
  // that class is rigid, and the table reproduces its subobject counts
  OracleBudget budget = OracleBudget::from_env();
  IsoClasses classes = iso_classes(q, alpha, 2, budget);
  const FpRep* T = nullptr;
  for (const FpRep& rep : classes.reps) {
    if (!is_semistable(rep, st, budget)) continue;
    if (T) throw Error("stabilizing weight admits several semistable classes at p = 2");
    T = &rep;
  }
  if (!T) throw Error("stabilizing weight admits no semistable class at p = 2");
  if (ext_dim(*T, *T) != 0) throw Error("stabilized class is not rigid at p = 2");
  for (const auto& [gamma, poly] : out)
    if (poly.eval_q(2) != BigRat(grassmannian_count(*T, gamma, budget)))
      throw Error("moduli table disagrees with the oracle at p = 2");
  return out;
}

bool verify_cluster_multiplication(const PrincipalFrame& frame, const FpRep& U,
                                   const FpRep& V, OracleBudget& budget) {
  if (U.quiver == nullptr || V.quiver == nullptr)
    throw Error("oracle representation carries no quiver");
  if (U.p != V.p) throw Error("representations live over different fields");
  const std::string canon = frame.quiver().canonical_string();
  if (U.quiver->canonical_string() != canon || V.quiver->canonical_string() != canon)
    throw Error("representations do not live on the frame quiver");
  const int p = U.p;
  const DimVector alpha = dim_add(U.dim, V.dim);

  ClusterElement lhs =
      cluster_variable(frame, U.dim, oracle_grassmannian_table(U, budget)) *
      cluster_variable(frame, V.dim, oracle_grassmannian_table(V, budget));

  // enumerate on the callers' quiver object: oracle reps compare by identity
  IsoClasses classes = iso_classes(*U.quiver, alpha, p, budget);
  std::map<int, BigInt> dist = ext_middle_distribution(U, V, classes, budget);
  BigInt total = 0;
  for (const auto& [idx, cnt] : dist) total += cnt;
  BigInt want = 1;
  for (int k = 0; k < ext_dim(U, V); ++k) want *= p;
  if (total != want) throw Error("extension enumeration lost cocycles");

  std::optional<ClusterElement> rhs;
  for (const auto& [idx, cnt] : dist) {
    ClusterElement term =
        cluster_variable(frame, alpha, oracle_grassmannian_table(classes.reps[idx], budget))
            .scaled(QRat(VPoly(cnt), VPoly(total)));
    rhs = rhs ? *rhs + term : term;
  }
  return cluster_equal_at(lhs, *rhs, BigInt(p));
}

}  // namespace qhall
