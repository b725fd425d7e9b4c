#include "qhall/lambdaring.hpp"

#include <functional>
#include <vector>

namespace qhall {

namespace {

// mobius function values 1..n_max by sieve
std::vector<int> mobius_upto(long long n_max) {
  std::vector<int> mu(n_max + 1, 1);
  std::vector<bool> prime(n_max + 1, true);
  for (long long p = 2; p <= n_max; ++p) {
    if (!prime[p]) continue;
    for (long long m = p; m <= n_max; m += p) {
      if (m > p) prime[m] = false;
      mu[m] = (m / p) % p == 0 ? 0 : -mu[m];
    }
  }
  return mu;
}

void require_untwisted(const GradedSeries& f, const char* op) {
  if (f.rule()->id().rfind("untwisted:", 0) != 0)
    throw Error(std::string(op) + " needs the untwisted rule");
}

const QRat& one() {
  static const QRat v(1);
  return v;
}

QRat rat_const(long long num, long long den) {
  return QRat(VPoly(num), VPoly(den));
}

// exp(g) = sum g^m / m! for g with zero constant term
GradedSeries plain_exp(const GradedSeries& g) {
  GradedSeries out = GradedSeries::unit(g.rule(), g.truncation());
  GradedSeries term = out;
  for (long long m = 1; m <= g.truncation(); ++m) {
    term = (term * g).scaled(rat_const(1, m));
    out = out + term;
  }
  return out;
}

// log(1 + u) = sum (-1)^(m+1) u^m / m for u with zero constant term
GradedSeries plain_log(const GradedSeries& u) {
  GradedSeries out(u.rule(), u.truncation());
  GradedSeries pw = GradedSeries::unit(u.rule(), u.truncation());
  for (long long m = 1; m <= u.truncation(); ++m) {
    pw = pw * u;
    out = out + pw.scaled(rat_const(m % 2 == 1 ? 1 : -1, m));
  }
  return out;
}

}  // namespace

GradedSeries exp_op(const GradedSeries& f) {
  require_untwisted(f, "Exp");
  SeriesKey zero(f.rule()->key_size(), 0);
  if (!f.coeff(zero).is_zero()) throw Error("Exp needs constant term 0");
  GradedSeries g(f.rule(), f.truncation());
  for (long long k = 1; k <= f.truncation(); ++k)
    g = g + f.adams((unsigned)k).scaled(rat_const(1, k));
  return plain_exp(g);
}

GradedSeries log_op(const GradedSeries& f) {
  require_untwisted(f, "Log");
  SeriesKey zero(f.rule()->key_size(), 0);
  if (f.coeff(zero) != one()) throw Error("Log needs constant term 1");
  GradedSeries u = f;
  u.set_coeff(zero, QRat());
  GradedSeries lg = plain_log(u);
  std::vector<int> mu = mobius_upto(f.truncation());
  GradedSeries out(f.rule(), f.truncation());
  for (long long k = 1; k <= f.truncation(); ++k) {
    if (mu[k] == 0) continue;
    out = out + lg.adams((unsigned)k).scaled(rat_const(mu[k], k));
  }
  return out;
}

namespace {

void require_q_polynomials(const GradedSeries& s, const char* which) {
  for (const auto& [k, c] : s.terms()) {
    if (!c.is_vpoly() || !c.as_vpoly().all_even() ||
        c.as_vpoly().min_exp() < 0)
      throw Error(std::string(which) +
                  " coefficient is not a polynomial in q: " + c.str());
  }
}

}  // namespace

ModuliSeries moduli_series(const Quiver& q, const Stability& st,
                           const Slope& mu0, long long truncation) {
  HNSolver solver(q, st, 1);
  int n = q.num_vertices();
  TwistRulePtr twisted = make_char_rule(q, 1);
  TwistRulePtr plain = make_untwisted_rule(n);
  GradedSeries rss(twisted, truncation);
  rss.set_coeff(SeriesKey(n, 0), one());
  DimVector alpha(n, 0);
  std::function<void(int, long long)> walk = [&](int v, long long left) {
    if (v == n) {
      if (!dim_is_zero(alpha) && slope_of(st, alpha) == mu0) {
        const auto& chunk = solver.semistable_chunk(alpha);
        auto it = chunk.find(flatten_key({alpha}));
        if (it != chunk.end()) rss.set_coeff(it->first, it->second);
      }
      return;
    }
    for (int x = 0; x <= left; ++x) {
      alpha[v] = x;
      walk(v + 1, left - x);
    }
    alpha[v] = 0;
  };
  walk(0, truncation);

  GradedSeries inv = rss.inverse().with_rule(plain);
  VPoly one_minus_q = VPoly(1) - VPoly::qpow(1);
  GradedSeries abs = log_op(inv).scaled(QRat(one_minus_q));
  require_q_polynomials(abs, "absolute series");
  GradedSeries rel = exp_op(abs);
  require_q_polynomials(rel, "relative series");
  return ModuliSeries{std::move(rss), std::move(abs), std::move(rel)};
}

BigInt euler_characteristic(const VPoly& m) {
  BigRat v = m.eval_q(1);
  if (boost::multiprecision::denominator(v) != 1)
    throw Error("Euler characteristic is not an integer");
  return boost::multiprecision::numerator(v);
}

}  // namespace qhall
