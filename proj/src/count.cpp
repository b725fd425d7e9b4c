#include "qhall/count.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace qhall {

namespace {

SeriesKey zero_key(int size) { return SeriesKey(size, 0); }

void chunk_add_term(HNSolver::Chunk& c, const SeriesKey& k, const QRat& v) {
  if (v.is_zero()) return;
  auto [it, inserted] = c.emplace(k, v);
  if (inserted) return;
  it->second += v;
  if (it->second.is_zero()) c.erase(it);
}

void chunk_sub(HNSolver::Chunk& c, const HNSolver::Chunk& o) {
  for (const auto& [k, v] : o) chunk_add_term(c, k, -v);
}

}  // namespace

bool CountResult::operator==(const CountResult& o) const {
  return raw == o.raw && normalized == o.normalized && coprime == o.coprime &&
         nonneg == o.nonneg;
}

std::string CountResult::to_json() const {
  nlohmann::json j;
  j["raw"] = raw.str();
  if (normalized)
    j["normalized"] = QRat(*normalized).str();
  else
    j["normalized"] = nullptr;
  j["coprime"] = coprime;
  j["nonneg"] = nonneg;
  return j.dump();
}

CountResult CountResult::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  CountResult r;
  r.raw = parse_qrat(j.at("raw").get<std::string>());
  if (!j.at("normalized").is_null()) {
    QRat n = parse_qrat(j.at("normalized").get<std::string>());
    r.normalized = n.as_vpoly();
  }
  r.coprime = j.at("coprime").get<bool>();
  r.nonneg = j.at("nonneg").get<bool>();
  return r;
}

std::optional<VPoly> normalized_count(const QRat& raw) {
  VPoly qm1 = VPoly::qpow(1) - VPoly(1);
  QRat scaled = QRat(qm1) * raw;
  if (!scaled.is_vpoly()) return std::nullopt;
  VPoly p = scaled.as_vpoly();
  if (p.is_zero()) return p;
  if (p.min_exp() < 0 || !p.all_even()) return std::nullopt;
  return p;
}

HNSolver::HNSolver(const Quiver& q, const Stability& st, int arity)
    : quiver_(q), stability_(st), arity_(arity) {
  validate_stability(q, st);
  if (arity < 1) throw Error("character arity must be at least 1");
  rule_ = make_char_rule(quiver_, arity);
}

const HNSolver::Chunk& HNSolver::full_chunk(const DimVector& beta) {
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  auto it = full_.find(beta);
  if (it != full_.end()) return it->second;
  GradedSeries s = char_integral_delta_t(quiver_, beta, arity_);
  return full_.emplace(beta, s.terms()).first->second;
}

HNSolver::Chunk HNSolver::chunk_mul(const Chunk& x, const Chunk& y) const {
  Chunk out;
  for (const auto& [ka, ca] : x)
    for (const auto& [kb, cb] : y) {
      SeriesKey k(ka.size());
      for (size_t i = 0; i < ka.size(); ++i) k[i] = ka[i] + kb[i];
      long long e = rule_->twist_vexp(ka, kb);
      chunk_add_term(out, k, ca * cb * QRat(VPoly::vpow(static_cast<int>(e))));
    }
  return out;
}

const HNSolver::Chunk& HNSolver::semistable_chunk(const DimVector& beta) {
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  return semistable_chunk_locked(beta);
}

const HNSolver::Chunk& HNSolver::semistable_chunk_locked(const DimVector& beta) {
  if (dim_is_zero(beta))
    throw Error("semistable chunk needs a nonzero dimension vector");
  auto it = ss_.find(beta);
  if (it != ss_.end()) return it->second;
  // chi_beta = sum over mu(a_1) < ... < mu(a_s) of chi^ss_{a_1}...chi^ss_{a_s};
  // peel the leftmost (lowest slope) factor a_1 = delta
  Chunk s = full_chunk(beta);
  for (const DimVector& delta : subvectors(beta)) {
    if (dim_is_zero(delta) || delta == beta) continue;
    const Chunk& head = semistable_chunk_locked(delta);
    const Chunk& rest =
        tail_chunk(slope_of(stability_, delta), dim_sub(beta, delta));
    chunk_sub(s, chunk_mul(head, rest));
  }
  return ss_.emplace(beta, std::move(s)).first->second;
}

const HNSolver::Chunk& HNSolver::tail_chunk(const Slope& floor,
                                            const DimVector& delta) {
  auto key = std::make_pair(floor, delta);
  auto it = tails_.find(key);
  if (it != tails_.end()) return it->second;
  Chunk out;
  if (dim_is_zero(delta)) {
    out.emplace(zero_key(rule_->key_size()), QRat(1));
  } else {
    for (const DimVector& head : subvectors(delta)) {
      if (dim_is_zero(head)) continue;
      Slope mu = slope_of(stability_, head);
      if (!(mu > floor)) continue;
      const Chunk& rest = tail_chunk(mu, dim_sub(delta, head));
      Chunk prod = chunk_mul(semistable_chunk_locked(head), rest);
      for (const auto& [k, v] : prod) chunk_add_term(out, k, v);
    }
  }
  return tails_.emplace(std::move(key), std::move(out)).first->second;
}

HNSolver::Chunk HNSolver::semistable_chunk_alternating(const DimVector& beta) {
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  if (dim_is_zero(beta))
    throw Error("semistable chunk needs a nonzero dimension vector");
  Slope mu_beta = slope_of(stability_, beta);
  Chunk out;
  Chunk unit;
  unit.emplace(zero_key(rule_->key_size()), QRat(1));
  // ordered decompositions with all proper prefix sums of slope < mu(beta)
  std::function<void(const DimVector&, const DimVector&, const Chunk&, int)>
      rec = [&](const DimVector& prefix, const DimVector& rest,
                const Chunk& acc, int sign) {
        for (const DimVector& delta : subvectors(rest)) {
          if (dim_is_zero(delta)) continue;
          Chunk next = chunk_mul(acc, full_chunk(delta));
          if (delta == rest) {
            for (const auto& [k, v] : next)
              chunk_add_term(out, k, sign > 0 ? v : -v);
          } else {
            DimVector pre = dim_add(prefix, delta);
            if (slope_of(stability_, pre) < mu_beta)
              rec(pre, dim_sub(rest, delta), next, -sign);
          }
        }
      };
  rec(DimVector(beta.size(), 0), beta, unit, 1);
  return out;
}

GradedSeries semistable_series(const HNProblem& problem, long long truncation) {
  if (truncation < dim_total(problem.target))
    throw Error("truncation does not cover the target dimension");
  HNSolver solver(problem.quiver, problem.stability, problem.character_arity);
  TwistRulePtr rule =
      make_char_rule(problem.quiver, problem.character_arity);
  GradedSeries out(rule, truncation);
  out.set_coeff(zero_key(rule->key_size()), QRat(1));
  int n = problem.quiver.num_vertices();
  DimVector beta(n, 0);
  std::function<void(int, long long)> walk = [&](int v, long long left) {
    if (v == n) {
      if (!dim_is_zero(beta))
        for (const auto& [k, c] : solver.semistable_chunk(beta))
          out.set_coeff(k, c);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      beta[v] = x;
      walk(v + 1, left - x);
    }
    beta[v] = 0;
  };
  walk(0, truncation);
  return out;
}

CountCache::CountCache(std::string dir) : dir_(std::move(dir)) {}

CountCache CountCache::from_env() {
  const char* dir = std::getenv("QHALL_CACHE_DIR");
  return CountCache(dir ? dir : "");
}

namespace {

std::string fnv64_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

}  // namespace

std::optional<std::string> CountCache::lookup(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::filesystem::path path =
      std::filesystem::path(dir_) / (fnv64_hex(key) + ".json");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  if (!j.contains("key") || j["key"] != key) return std::nullopt;
  return j.at("value").get<std::string>();
}

void CountCache::store(const std::string& key, const std::string& value) const {
  if (!enabled()) return;
  std::filesystem::create_directories(dir_);
  std::filesystem::path path =
      std::filesystem::path(dir_) / (fnv64_hex(key) + ".json");
  nlohmann::json j;
  j["key"] = key;
  j["value"] = value;
  std::ofstream out(path);
  out << j.dump();
}

namespace {

constexpr const char* kCacheVersion = "qhall-count-1";

std::string dims_str(const DimVector& a) {
  std::string s;
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a[i]);
  }
  return s;
}

std::string weight_str(const Weight& w) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(w[i]);
  }
  return s;
}

std::string base_key(const Quiver& q, const Stability& st) {
  return std::string(kCacheVersion) + "|quiver=" + q.canonical_string() +
         "|sigma=" + weight_str(st.sigma) + "|theta=" + weight_str(st.theta);
}

CountResult finish_count(const Quiver& q, const Stability& st,
                         const DimVector& alpha, const QRat& raw) {
  CountResult res;
  res.raw = raw;
  res.coprime = coprime_check(q, st, alpha);
  res.normalized = normalized_count(raw);
  res.nonneg = res.normalized.has_value() && res.normalized->nonneg_coeffs();
  return res;
}

CountResult with_cache(const CountCache* cache, const std::string& key,
                       const std::function<CountResult()>& compute) {
  if (cache != nullptr && cache->enabled()) {
    if (auto hit = cache->lookup(key)) return CountResult::from_json(*hit);
    CountResult res = compute();
    cache->store(key, res.to_json());
    return res;
  }
  return compute();
}

void check_alpha(const Quiver& q, const DimVector& alpha) {
  if ((int)alpha.size() != q.num_vertices())
    throw Error("dimension vector size does not match the quiver");
  if (!dim_nonneg(alpha)) throw Error("dimension vector must be nonnegative");
  if (dim_is_zero(alpha)) throw Error("dimension vector must be nonzero");
}

}  // namespace

std::string moduli_cache_key(const Quiver& q, const Stability& st,
                             const DimVector& alpha) {
  return base_key(q, st) + "|op=moduli|alpha=" + dims_str(alpha);
}

std::string grassmannian_cache_key(const Quiver& q, const Stability& st,
                                   const DimVector& alpha,
                                   const DimVector& gamma) {
  return base_key(q, st) + "|op=grass|alpha=" + dims_str(alpha) +
         "|gamma=" + dims_str(gamma);
}

std::string flag_cache_key(const Quiver& q, const Stability& st,
                           const std::vector<DimVector>& parts) {
  std::string s = base_key(q, st) + "|op=flag|parts=";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ';';
    s += dims_str(parts[i]);
  }
  return s;
}

CountResult moduli_count(const Quiver& q, const Stability& st,
                         const DimVector& alpha, const CountCache* cache) {
  check_alpha(q, alpha);
  return with_cache(cache, moduli_cache_key(q, st, alpha), [&] {
    HNSolver solver(q, st, 1);
    QRat raw;
    const auto& chunk = solver.semistable_chunk(alpha);
    auto it = chunk.find(flatten_key({alpha}));
    if (it != chunk.end()) raw = it->second;
    return finish_count(q, st, alpha, raw);
  });
}

CountResult grassmannian_moduli_count(const Quiver& q, const Stability& st,
                                      const DimVector& alpha,
                                      const DimVector& gamma,
                                      const CountCache* cache) {
  check_alpha(q, alpha);
  if ((int)gamma.size() != q.num_vertices() || !dim_nonneg(gamma) ||
      !dim_leq(gamma, alpha))
    throw Error("gamma must satisfy 0 <= gamma <= alpha");
  return with_cache(cache, grassmannian_cache_key(q, st, alpha, gamma), [&] {
    HNSolver solver(q, st, 2);
    QRat raw;
    const auto& chunk = solver.semistable_chunk(alpha);
    auto it = chunk.find(flatten_key({gamma, dim_sub(alpha, gamma)}));
    if (it != chunk.end()) raw = it->second;
    return finish_count(q, st, alpha, raw);
  });
}

CountResult flag_moduli_count(const Quiver& q, const Stability& st,
                              const std::vector<DimVector>& parts,
                              const CountCache* cache) {
  if (parts.empty()) throw Error("flag needs at least one part");
  DimVector alpha = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) alpha = dim_add(alpha, parts[i]);
  check_alpha(q, alpha);
  for (const DimVector& p : parts)
    if ((int)p.size() != q.num_vertices() || !dim_nonneg(p))
      throw Error("flag parts must be nonnegative dimension vectors");
  return with_cache(cache, flag_cache_key(q, st, parts), [&] {
    HNSolver solver(q, st, (int)parts.size());
    QRat raw;
    const auto& chunk = solver.semistable_chunk(alpha);
    auto it = chunk.find(flatten_key(parts));
    if (it != chunk.end()) raw = it->second;
    return finish_count(q, st, alpha, raw);
  });
}

QRat transfer_matrix_grassmannian(const Quiver& q, const Stability& st,
                                  const DimVector& alpha,
                                  const DimVector& gamma) {
  check_alpha(q, alpha);
  validate_stability(q, st);
  if ((int)gamma.size() != q.num_vertices() || !dim_nonneg(gamma) ||
      !dim_leq(gamma, alpha))
    throw Error("gamma must satisfy 0 <= gamma <= alpha");
  Slope mu_alpha = slope_of(st, alpha);
  int n = q.num_vertices();

  struct Node {
    DimVector a;
    DimVector g;
  };
  std::vector<Node> nodes;
  nodes.push_back({DimVector(n, 0), DimVector(n, 0)});
  for (const DimVector& a : subvectors(alpha)) {
    if (dim_is_zero(a)) continue;
    if (!(slope_of(st, a) < mu_alpha)) continue;
    DimVector cap(n);
    for (int v = 0; v < n; ++v) cap[v] = std::min(a[v], gamma[v]);
    for (const DimVector& g : subvectors(cap)) nodes.push_back({a, g});
  }
  nodes.push_back({alpha, gamma});
  std::sort(nodes.begin(), nodes.end(), [](const Node& x, const Node& y) {
    return std::make_tuple(dim_total(x.a), x.a, x.g) <
           std::make_tuple(dim_total(y.a), y.a, y.g);
  });

  // entry (u, w): q^(<g_u, b> - <a_u, ak>) r_{b,gk}  for the step
  // (ak, gk) = (a_w - a_u, g_w - g_u), b = ak - gk, when the step is valid
  auto entry = [&](const Node& u, const Node& w) -> QRat {
    DimVector ak(n), gk(n), b(n);
    for (int v = 0; v < n; ++v) {
      ak[v] = w.a[v] - u.a[v];
      gk[v] = w.g[v] - u.g[v];
      b[v] = ak[v] - gk[v];
    }
    if (!dim_nonneg(ak) || !dim_nonneg(gk) || !dim_nonneg(b)) return QRat();
    long long e = q.euler_form(u.g, b) - q.euler_form(u.a, ak) -
                  q.euler_form(b, gk);
    return QRat(VPoly::qpow(static_cast<int>(e))) * rep_class_mass(q, b) *
           rep_class_mass(q, gk);
  };

  // back-substitute M x = e_target for the unitriangular M = I + N
  size_t target = nodes.size() - 1;
  std::vector<QRat> x(nodes.size());
  x[target] = QRat(1);
  for (size_t u = target; u-- > 0;) {
    QRat acc;
    for (size_t w = u + 1; w < nodes.size(); ++w) {
      if (x[w].is_zero()) continue;
      QRat e = entry(nodes[u], nodes[w]);
      if (!e.is_zero()) acc -= e * x[w];
    }
    x[u] = acc;
  }
  QRat f = x[0];
  if (!f.is_zero() && f.num().leading() < 0) f = -f;
  return f;
}

}  // namespace qhall
