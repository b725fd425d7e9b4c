#include "qhall/series.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace qhall {

long long TwistRule::degree(const SeriesKey& k) const {
  long long d = 0;
  for (int e : k) d += e;
  return d;
}

void TwistRule::validate_key(const SeriesKey& k) const {
  if ((int)k.size() != key_size())
    throw Error("series key has size " + std::to_string(k.size()) +
                ", rule expects " + std::to_string(key_size()));
  for (int e : k)
    if (e < 0) throw Error("series key entry is negative");
}

namespace {

class UntwistedRule : public TwistRule {
 public:
  explicit UntwistedRule(int n) : n_(n) {}
  std::string id() const override { return "untwisted:" + std::to_string(n_); }
  int arity() const override { return 1; }
  int group_size() const override { return n_; }
  long long twist_vexp(const SeriesKey&, const SeriesKey&) const override { return 0; }

 private:
  int n_;
};

class CharRule : public TwistRule {
 public:
  CharRule(const Quiver& q, int t) : q_(q), t_(t) {
    if (t < 1) throw Error("character arity must be >= 1");
  }
  std::string id() const override {
    return "char:" + std::to_string(t_) + ":" + q_.canonical_string();
  }
  int arity() const override { return t_; }
  int group_size() const override { return q_.num_vertices(); }
  // tau(L,R) = prod_{i>=j} <L_i,R_j>^(-1), groups indexed sub-first
  long long twist_vexp(const SeriesKey& L, const SeriesKey& R) const override {
    const int n = q_.num_vertices();
    long long e = 0;
    for (int i = 0; i < t_; ++i) {
      DimVector Li(L.begin() + i * n, L.begin() + (i + 1) * n);
      for (int j = 0; j <= i; ++j) {
        DimVector Rj(R.begin() + j * n, R.begin() + (j + 1) * n);
        e -= 2 * q_.euler_form(Li, Rj);
      }
    }
    return e;
  }

 private:
  Quiver q_;
  int t_;
};

class AntisymRule : public TwistRule {
 public:
  explicit AntisymRule(const Quiver& q) : q_(q) {}
  std::string id() const override { return "antisym:" + q_.canonical_string(); }
  int arity() const override { return 1; }
  int group_size() const override { return q_.num_vertices(); }
  long long twist_vexp(const SeriesKey& L, const SeriesKey& R) const override {
    return q_.euler_form(R, L) - q_.euler_form(L, R);
  }

 private:
  Quiver q_;
};

class ClusterRule : public TwistRule {
 public:
  explicit ClusterRule(std::vector<std::vector<int>> B) : B_(std::move(B)) {
    n_ = (int)B_.size();
    for (const auto& row : B_)
      if ((int)row.size() != n_) throw Error("cluster exchange matrix is not square");
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (B_[i][j] != -B_[j][i]) throw Error("cluster exchange matrix is not antisymmetric");
  }
  std::string id() const override {
    std::ostringstream os;
    os << "cluster:" << n_;
    for (const auto& row : B_)
      for (int e : row) os << ":" << e;
    return os.str();
  }
  int arity() const override { return 2; }  // x-part, y-part
  int group_size() const override { return n_; }
  // x^a1 y^b1 * x^a2 y^b2 = v^(b1.a2 - a1.b2 + b1 B b2^T) x^(a1+a2) y^(b1+b2)
  long long twist_vexp(const SeriesKey& L, const SeriesKey& R) const override {
    long long e = 0;
    for (int i = 0; i < n_; ++i) {
      e += (long long)L[n_ + i] * R[i];  // b1 . a2
      e -= (long long)L[i] * R[n_ + i];  // a1 . b2
    }
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) e += (long long)L[n_ + i] * B_[i][j] * R[n_ + j];
    return e;
  }
  // x exponents may be negative; grading counts the y-part only
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
  std::vector<std::vector<int>> B_;
  int n_;
};

}  // namespace

TwistRulePtr make_untwisted_rule(int n) { return std::make_shared<UntwistedRule>(n); }
TwistRulePtr make_char_rule(const Quiver& q, int t) { return std::make_shared<CharRule>(q, t); }
TwistRulePtr make_antisym_rule(const Quiver& q) { return std::make_shared<AntisymRule>(q); }
TwistRulePtr make_cluster_rule(const std::vector<std::vector<int>>& B) {
  return std::make_shared<ClusterRule>(B);
}

GradedSeries::GradedSeries(TwistRulePtr rule, long long truncation)
    : rule_(std::move(rule)), truncation_(truncation) {
  if (!rule_) throw Error("series rule is null");
  if (truncation_ < 0) throw Error("series truncation is negative");
}

GradedSeries GradedSeries::unit(TwistRulePtr rule, long long truncation) {
  GradedSeries s(std::move(rule), truncation);
  SeriesKey zero(s.rule_->key_size(), 0);
  s.terms_[zero] = QRat(1);
  return s;
}

QRat GradedSeries::coeff(const SeriesKey& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? QRat(0) : it->second;
}

void GradedSeries::set_coeff(const SeriesKey& k, const QRat& c) {
  rule_->validate_key(k);
  if (rule_->degree(k) > truncation_) return;
  if (c.is_zero())
    terms_.erase(k);
  else
    terms_[k] = c;
}

void GradedSeries::add_coeff(const SeriesKey& k, const QRat& c) {
  rule_->validate_key(k);
  if (rule_->degree(k) > truncation_) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_[k] = c;
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

bool GradedSeries::operator==(const GradedSeries& o) const {
  return rule_->id() == o.rule_->id() && truncation_ == o.truncation_ && terms_ == o.terms_;
}

static void require_same_algebra(const GradedSeries& a, const GradedSeries& b) {
  if (a.rule()->id() != b.rule()->id())
    throw Error("series rule mismatch: " + a.rule()->id() + " vs " + b.rule()->id());
  if (a.truncation() != b.truncation())
    throw Error("series truncation mismatch");
}

GradedSeries GradedSeries::operator+(const GradedSeries& o) const {
  require_same_algebra(*this, o);
  GradedSeries r(*this);
  for (const auto& [k, c] : o.terms_) r.add_coeff(k, c);
  return r;
}

GradedSeries GradedSeries::operator-(const GradedSeries& o) const {
  require_same_algebra(*this, o);
  GradedSeries r(*this);
  for (const auto& [k, c] : o.terms_) r.add_coeff(k, (-c));
  return r;
}

GradedSeries GradedSeries::operator*(const GradedSeries& o) const {
  require_same_algebra(*this, o);
  GradedSeries r(rule_, truncation_);
  const int sz = rule_->key_size();
  for (const auto& [ka, ca] : terms_) {
    long long da = rule_->degree(ka);
    for (const auto& [kb, cb] : o.terms_) {
      if (da + rule_->degree(kb) > truncation_) continue;
      SeriesKey k(sz);
      for (int i = 0; i < sz; ++i) k[i] = ka[i] + kb[i];
      QRat c = ca * cb;
      long long e = rule_->twist_vexp(ka, kb);
      if (e != 0) c = c * QRat(VPoly::vpow(e));
      r.add_coeff(k, c);
    }
  }
  return r;
}

GradedSeries GradedSeries::scaled(const QRat& c) const {
  GradedSeries r(rule_, truncation_);
  if (c.is_zero()) return r;
  for (const auto& [k, v] : terms_) r.terms_[k] = v * c;
  return r;
}

GradedSeries GradedSeries::inverse() const {
  SeriesKey zero(rule_->key_size(), 0);
  QRat c0 = coeff(zero);
  if (c0.is_zero()) throw Error("series has no invertible constant term");
  // split into graded pieces; solve g_d = -c0^(-1) * sum_{e=1..d} f_e * g_{d-e}
  std::map<long long, GradedSeries> piece;
  for (const auto& [k, c] : terms_) {
    long long d = rule_->degree(k);
    if (d == 0) continue;
    auto it = piece.try_emplace(d, GradedSeries(rule_, truncation_)).first;
    it->second.terms_[k] = c;
  }
  QRat c0inv = c0.inverse();
  std::map<long long, GradedSeries> g;
  GradedSeries g0(rule_, truncation_);
  g0.terms_[zero] = c0inv;
  g.emplace(0, g0);
  GradedSeries result = g0;
  for (long long d = 1; d <= truncation_; ++d) {
    GradedSeries acc(rule_, truncation_);
    for (const auto& [e, fe] : piece) {
      if (e > d) break;
      auto it = g.find(d - e);
      if (it == g.end()) continue;
      acc = acc + fe * it->second;
    }
    if (acc.terms_.empty()) continue;
    // constant term commutes with every twist (zero key twists trivially)
    GradedSeries gd = acc.scaled((-c0inv));
    g.emplace(d, gd);
    result = result + gd;
  }
  return result;
}

GradedSeries GradedSeries::adams(unsigned n) const {
  if (rule_->arity() != 1)
    throw Error("adams operations require an untwisted rule");
  if (dynamic_cast<const UntwistedRule*>(rule_.get()) == nullptr)
    throw Error("adams operations require an untwisted rule");
  if (n == 0) throw Error("adams index must be positive");
  GradedSeries r(rule_, truncation_);
  for (const auto& [k, c] : terms_) {
    SeriesKey kn(k.size());
    for (size_t i = 0; i < k.size(); ++i) kn[i] = k[i] * (int)n;
    if (rule_->degree(kn) > truncation_) continue;
    r.terms_[kn] = c.adams(n);
  }
  return r;
}

GradedSeries GradedSeries::with_rule(TwistRulePtr new_rule) const {
  if (!new_rule) throw Error("series rule is null");
  if (new_rule->key_size() != rule_->key_size())
    throw Error("rule key sizes do not match");
  GradedSeries r(std::move(new_rule), truncation_);
  for (const auto& [k, c] : terms_) r.set_coeff(k, c);
  return r;
}

GradedSeries GradedSeries::truncated(long long new_truncation) const {
  GradedSeries r(rule_, new_truncation);
  for (const auto& [k, c] : terms_)
    if (rule_->degree(k) <= new_truncation) r.terms_[k] = c;
  return r;
}

GradedSeries GradedSeries::graded_piece(long long d) const {
  GradedSeries r(rule_, truncation_);
  for (const auto& [k, c] : terms_)
    if (rule_->degree(k) == d) r.terms_[k] = c;
  return r;
}

long long GradedSeries::max_degree() const {
  long long m = 0;
  for (const auto& [k, c] : terms_) m = std::max(m, rule_->degree(k));
  return m;
}

std::map<SeriesKey, BigRat> GradedSeries::eval_q(const BigInt& q0) const {
  std::map<SeriesKey, BigRat> r;
  for (const auto& [k, c] : terms_) r[k] = c.eval_q(q0);
  return r;
}

std::string GradedSeries::to_json() const {
  nlohmann::json j;
  j["rule"] = rule_->id();
  j["truncation"] = truncation_;
  auto arr = nlohmann::json::array();
  for (const auto& [k, c] : terms_) {
    nlohmann::json t;
    t["key"] = k;
    t["coeff"] = c.str();
    arr.push_back(std::move(t));
  }
  j["terms"] = std::move(arr);
  return j.dump(2);
}

GradedSeries GradedSeries::from_json(const std::string& text, TwistRulePtr rule) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::string id = j.at("rule").get<std::string>();
  if (id != rule->id())
    throw Error("serialized rule " + id + " does not match " + rule->id());
  GradedSeries s(rule, j.at("truncation").get<long long>());
  for (const auto& t : j.at("terms")) {
    SeriesKey k = t.at("key").get<SeriesKey>();
    s.set_coeff(k, parse_qrat(t.at("coeff").get<std::string>()));
  }
  return s;
}

QRat rep_class_mass(const Quiver& q, const DimVector& alpha) {
  QRat num(VPoly::qpow(q.rep_dim(alpha)));
  VPoly den(1);
  for (int v = 0; v < q.num_vertices(); ++v) den = den * gl_order(alpha[v]);
  return num / QRat(den);
}

GradedSeries char_integral(const Quiver& q, const DimVector& alpha) {
  auto rule = make_char_rule(q, 1);
  GradedSeries s(rule, dim_total(alpha));
  s.set_coeff(alpha, rep_class_mass(q, alpha));
  return s;
}

std::vector<std::vector<DimVector>> compositions_t(const DimVector& alpha, int t) {
  std::vector<std::vector<DimVector>> out;
  std::vector<DimVector> cur;
  DimVector rest = alpha;
  std::function<void(int)> rec = [&](int slot) {
    if (slot == t - 1) {
      cur.push_back(rest);
      out.push_back(cur);
      cur.pop_back();
      return;
    }
    for (const DimVector& part : subvectors(rest)) {
      cur.push_back(part);
      DimVector saved = rest;
      rest = dim_sub(rest, part);
      rec(slot + 1);
      rest = saved;
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

SeriesKey flatten_key(const std::vector<DimVector>& parts) {
  SeriesKey k;
  for (const auto& p : parts) k.insert(k.end(), p.begin(), p.end());
  return k;
}

std::vector<DimVector> split_key(const SeriesKey& k, int t) {
  if (t < 1 || k.size() % t != 0) throw Error("key does not split into " + std::to_string(t) + " parts");
  int n = (int)k.size() / t;
  std::vector<DimVector> parts;
  for (int i = 0; i < t; ++i)
    parts.emplace_back(k.begin() + i * n, k.begin() + (i + 1) * n);
  return parts;
}

GradedSeries char_integral_delta_t(const Quiver& q, const DimVector& alpha, int t) {
  auto rule = make_char_rule(q, t);
  GradedSeries s(rule, dim_total(alpha));
  for (const auto& parts : compositions_t(alpha, t)) {
    // coefficient: prod_{i>j} <part_i, part_j>^(-1) * prod_i r_{part_i}
    long long e = 0;
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < i; ++j) e -= 2 * q.euler_form(parts[i], parts[j]);
    QRat c(VPoly::vpow(e));
    for (int i = 0; i < t; ++i) c = c * rep_class_mass(q, parts[i]);
    s.add_coeff(flatten_key(parts), c);
  }
  return s;
}

GradedSeries char_integral_delta(const Quiver& q, const DimVector& alpha) {
  return char_integral_delta_t(q, alpha, 2);
}

}  // namespace qhall
