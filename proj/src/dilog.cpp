#include "qhall/dilog.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "qhall/exactq.hpp"

namespace qhall {

namespace {

VPoly q_power_minus_one(int k) { return VPoly::qpow(k) - VPoly(1); }

// The Tits form is positive definite exactly in finite representation type.
// Bareiss elimination on the symmetrized Euler matrix; every leading
// principal minor appears as a pivot and must be positive.
bool tits_positive_definite(const Quiver& q) {
  int n = q.num_vertices();
  const auto& e = q.euler_matrix();
  std::vector<std::vector<long long>> s(n, std::vector<long long>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s[i][j] = e[i][j] + e[j][i];
  long long prev = 1;
  for (int k = 0; k < n; ++k) {
    if (s[k][k] <= 0) return false;
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        s[i][j] = (s[i][j] * s[k][k] - s[i][k] * s[k][j]) / prev;
    prev = s[k][k];
  }
  return true;
}

// One F_2 model per class; exactly one class of each root dimension is
// indecomposable in finite type.
FpRep indecomposable_model(const Quiver& q, const DimVector& root,
                           OracleBudget& budget) {
  IsoClasses classes = iso_classes(q, root, 2, budget);
  std::optional<FpRep> found;
  for (const auto& m : classes.reps) {
    if (!is_indecomposable(m, budget)) continue;
    if (found) throw Error("several indecomposables share a root dimension");
    found = m;
  }
  if (!found) throw Error("no indecomposable of a root dimension");
  return *found;
}

}  // namespace

GradedSeries quantum_exp(const Quiver& q, const DimVector& delta,
                         long long truncation) {
  if ((int)delta.size() != q.num_vertices())
    throw Error("dimension vector has the wrong length");
  if (dim_is_zero(delta) || !dim_nonneg(delta))
    throw Error("quantum exponential needs a nonzero nonnegative exponent");
  GradedSeries s = GradedSeries::unit(make_antisym_rule(q), truncation);
  long long step = dim_total(delta);
  QRat c(VPoly(1));
  SeriesKey key(delta.size(), 0);
  for (long long deg = step, n = 1; deg <= truncation; deg += step, ++n) {
    // c_n = c_{n-1} * v/(q^n - 1), so c_n = v^n / prod_{k<=n}(q^k - 1)
    c = c * QRat(VPoly::vpow(1), q_power_minus_one((int)n));
    key = dim_add(key, delta);
    s.set_coeff(key, c);
  }
  return s;
}

GradedSeries quantum_exp_product(const Quiver& q,
                                 const std::vector<DimVector>& deltas,
                                 long long truncation) {
  GradedSeries s = GradedSeries::unit(make_antisym_rule(q), truncation);
  for (const auto& d : deltas) s = s * quantum_exp(q, d, truncation);
  return s;
}

GradedSeries character_series(const Quiver& q, long long truncation) {
  GradedSeries s = GradedSeries::unit(make_antisym_rule(q), truncation);
  int n = q.num_vertices();
  DimVector alpha(n, 0);
  std::function<void(int, long long)> scan = [&](int v, long long left) {
    if (v == n) {
      if (dim_is_zero(alpha)) return;  // the unit carries the empty class
      QRat c = QRat(VPoly::vpow((int)q.euler_form(alpha, alpha))) *
               rep_class_mass(q, alpha);
      s.set_coeff(alpha, c);
      return;
    }
    for (long long k = 0; k <= left; ++k) {
      alpha[v] = (int)k;
      scan(v + 1, left - k);
    }
    alpha[v] = 0;
  };
  scan(0, truncation);
  return s;
}

std::vector<DimVector> simple_order(const Quiver& q) {
  if (!q.is_acyclic()) throw Error("simple order needs an acyclic quiver");
  int n = q.num_vertices();
  std::vector<int> indeg(n, 0);
  for (const auto& a : q.arrows()) ++indeg[a.head];
  std::vector<DimVector> order;
  std::vector<bool> used(n, false);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v)
      if (!used[v] && indeg[v] == 0) {
        pick = v;
        break;
      }
    used[pick] = true;
    for (const auto& a : q.arrows())
      if (a.tail == pick) --indeg[a.head];
    DimVector e(n, 0);
    e[pick] = 1;
    order.push_back(e);
  }
  return order;
}

std::vector<DimVector> dynkin_indecomposables(const Quiver& q,
                                              OracleBudget& budget) {
  if (!q.is_acyclic())
    throw Error("indecomposable order needs an acyclic quiver");
  if (!tits_positive_definite(q))
    throw Error("indecomposable order needs finite representation type");
  std::vector<DimVector> roots = positive_roots(q);
  size_t n = roots.size();
  std::vector<FpRep> models;
  models.reserve(n);
  for (const auto& r : roots) models.push_back(indecomposable_model(q, r, budget));

  // Nonzero Homs orient a dag: the algebra is representation-directed.
  std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
  std::vector<int> indeg(n, 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j && hom_dim(models[i], models[j]) > 0) {
        edge[i][j] = true;
        ++indeg[j];
      }

  std::vector<size_t> order;
  std::vector<bool> used(n, false);
  auto precedes = [&](size_t a, size_t b) {
    long long ta = dim_total(roots[a]), tb = dim_total(roots[b]);
    if (ta != tb) return ta < tb;
    return roots[a] < roots[b];
  };
  for (size_t step = 0; step < n; ++step) {
    std::optional<size_t> pick;
    for (size_t i = 0; i < n; ++i)
      if (!used[i] && indeg[i] == 0 && (!pick || precedes(i, *pick))) pick = i;
    if (!pick) throw Error("hom order of the indecomposables has a cycle");
    used[*pick] = true;
    order.push_back(*pick);
    for (size_t j = 0; j < n; ++j)
      if (edge[*pick][j]) --indeg[j];
  }

  // Backward Homs vanish by construction; forward and self extensions must
  // vanish for the slope order to exist.
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j)
      if (ext_dim(models[order[i]], models[order[j]]) != 0)
        throw Error("indecomposable order admits forward extensions");

  std::vector<DimVector> out;
  out.reserve(n);
  for (size_t i : order) out.push_back(roots[i]);
  return out;
}

std::vector<DimVector> dynkin_indecomposables(
    char type, int rank, const std::vector<bool>& orientation) {
  Quiver q = dynkin_quiver(type, rank, orientation);
  OracleBudget budget = OracleBudget::from_env();
  return dynkin_indecomposables(q, budget);
}

namespace {

std::string key_str(const SeriesKey& k) {
  std::ostringstream out;
  out << "t^(";
  for (size_t i = 0; i < k.size(); ++i) {
    if (i) out << ",";
    out << k[i];
  }
  out << ")";
  return out.str();
}

std::string first_difference(const GradedSeries& simples,
                             const GradedSeries& indec,
                             const GradedSeries& direct) {
  std::map<SeriesKey, bool> keys;
  for (const auto& [k, c] : simples.terms()) keys[k] = true;
  for (const auto& [k, c] : indec.terms()) keys[k] = true;
  for (const auto& [k, c] : direct.terms()) keys[k] = true;
  for (const auto& [k, unused] : keys) {
    QRat a = simples.coeff(k), b = indec.coeff(k), d = direct.coeff(k);
    if (a == d && b == d) continue;
    std::ostringstream out;
    out << key_str(k) << ": simples " << a.str() << ", indecomposables "
        << b.str() << ", character " << d.str();
    return out.str();
  }
  return "";
}

}  // namespace

DilogReport verify_dynkin_identity(char type, int rank,
                                   const std::vector<bool>& orientation,
                                   long long truncation) {
  Quiver q = dynkin_quiver(type, rank, orientation);
  OracleBudget budget = OracleBudget::from_env();
  GradedSeries direct = character_series(q, truncation);
  GradedSeries simples = quantum_exp_product(q, simple_order(q), truncation);
  GradedSeries indec =
      quantum_exp_product(q, dynkin_indecomposables(q, budget), truncation);
  DilogReport report;
  report.simples_match = simples == direct;
  report.indec_match = indec == direct;
  report.ok = report.simples_match && report.indec_match;
  if (!report.ok) report.first_diff = first_difference(simples, indec, direct);
  return report;
}

}  // namespace qhall
