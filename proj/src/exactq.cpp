#include "qhall/exactq.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qhall {

VPoly VPoly::monomial(const BigInt& coeff, int vexp) {
  VPoly p;
  if (coeff != 0) p.c_[vexp] = coeff;
  return p;
}

int VPoly::min_exp() const {
  if (c_.empty()) throw Error("min_exp of zero polynomial");
  return c_.begin()->first;
}

int VPoly::max_exp() const {
  if (c_.empty()) throw Error("max_exp of zero polynomial");
  return c_.rbegin()->first;
}

const BigInt& VPoly::leading() const {
  if (c_.empty()) throw Error("leading coefficient of zero polynomial");
  return c_.rbegin()->second;
}

BigInt VPoly::coeff(int vexp) const {
  auto it = c_.find(vexp);
  return it == c_.end() ? BigInt(0) : it->second;
}

void VPoly::set_coeff(int vexp, const BigInt& c) {
  if (c == 0) c_.erase(vexp); else c_[vexp] = c;
}

VPoly VPoly::operator-() const {
  VPoly r;
  for (auto& [e, c] : c_) r.c_[e] = -c;
  return r;
}

VPoly VPoly::operator+(const VPoly& o) const {
  VPoly r = *this;
  for (auto& [e, c] : o.c_) {
    auto it = r.c_.find(e);
    if (it == r.c_.end()) r.c_[e] = c;
    else {
      it->second += c;
      if (it->second == 0) r.c_.erase(it);
    }
  }
  return r;
}

VPoly VPoly::operator-(const VPoly& o) const { return *this + (-o); }

VPoly VPoly::operator*(const VPoly& o) const {
  VPoly r;
  for (auto& [e1, c1] : c_)
    for (auto& [e2, c2] : o.c_) {
      auto& slot = r.c_[e1 + e2];
      slot += c1 * c2;
    }
  for (auto it = r.c_.begin(); it != r.c_.end();)
    it = (it->second == 0) ? r.c_.erase(it) : std::next(it);
  return r;
}

VPoly VPoly::shifted(int vexp) const {
  VPoly r;
  for (auto& [e, c] : c_) r.c_[e + vexp] = c;
  return r;
}

VPoly VPoly::pow(unsigned n) const {
  VPoly r(1), b = *this;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

VPoly VPoly::adams(unsigned n) const {
  if (n == 0) throw Error("adams index must be positive");
  VPoly r;
  for (auto& [e, c] : c_) r.c_[e * static_cast<int>(n)] = c;
  return r;
}

BigInt VPoly::content() const {
  BigInt g = 0;
  for (auto& [e, c] : c_) g = boost::multiprecision::gcd(g, c);
  return g < 0 ? BigInt(-g) : g;
}

bool VPoly::all_even() const {
  for (auto& [e, c] : c_)
    if (e % 2 != 0) return false;
  return true;
}

bool VPoly::nonneg_coeffs() const {
  for (auto& [e, c] : c_)
    if (c < 0) return false;
  return true;
}

VPoly VPoly::exact_div(const VPoly& o) const {
  if (o.is_zero()) throw Error("division by zero polynomial");
  if (is_zero()) return VPoly();
  // divide as v-shifted ordinary polynomials, then restore the shift
  VPoly rem = shifted(-min_exp());
  VPoly div = o.shifted(-o.min_exp());
  int shift = min_exp() - o.min_exp();
  VPoly quot;
  while (!rem.is_zero() && rem.max_exp() >= div.max_exp()) {
    BigInt qc = rem.leading() / div.leading();
    if (qc * div.leading() != rem.leading())
      throw Error("exact_div: leading coefficient not divisible");
    int qe = rem.max_exp() - div.max_exp();
    VPoly t = monomial(qc, qe);
    quot += t;
    rem -= t * div;
  }
  if (!rem.is_zero()) throw Error("exact_div: nonzero remainder");
  return quot.shifted(shift);
}

BigRat VPoly::eval_q(const BigInt& q0) const {
  if (!all_even())
    throw Error("eval_q: odd power of v survives, value involves sqrt(q)");
  BigRat r = 0;
  for (auto& [e, c] : c_) {
    int k = e / 2;
    BigInt p = boost::multiprecision::pow(q0, static_cast<unsigned>(k < 0 ? -k : k));
    if (k >= 0) r += BigRat(c) * BigRat(p);
    else r += BigRat(c) / BigRat(p);
  }
  return r;
}

std::pair<BigRat, BigRat> VPoly::eval_v(const BigInt& q0) const {
  // v^(2k) = q0^k, v^(2k+1) = q0^k * sqrt(q0)
  BigRat a = 0, b = 0;
  for (auto& [e, c] : c_) {
    int k = (e >= 0 ? e : e - 1) / 2;  // floor(e/2)
    BigInt p = boost::multiprecision::pow(q0, static_cast<unsigned>(k < 0 ? -k : k));
    BigRat f = (k >= 0) ? BigRat(p) : BigRat(1) / BigRat(p);
    if (e % 2 == 0) a += BigRat(c) * f;
    else b += BigRat(c) * f;
  }
  return {a, b};
}

namespace {

// ordinary-polynomial helpers on dense coefficient vectors (index = exponent)
using Dense = std::vector<BigInt>;

Dense to_dense(const VPoly& p) {
  Dense d(static_cast<size_t>(p.max_exp()) + 1);
  for (auto& [e, c] : p.terms()) d[static_cast<size_t>(e)] = c;
  return d;
}

VPoly from_dense(const Dense& d) {
  VPoly p;
  for (size_t i = 0; i < d.size(); ++i)
    if (d[i] != 0) p.set_coeff(static_cast<int>(i), d[i]);
  return p;
}

void trim(Dense& d) {
  while (!d.empty() && d.back() == 0) d.pop_back();
}

BigInt dense_content(const Dense& d) {
  BigInt g = 0;
  for (auto& c : d) g = boost::multiprecision::gcd(g, c);
  return g < 0 ? BigInt(-g) : g;
}

void make_primitive(Dense& d) {
  trim(d);
  if (d.empty()) return;
  BigInt g = dense_content(d);
  if (d.back() < 0) g = -g;
  for (auto& c : d) c /= g;
}

// pseudo-remainder of a by b (deg a >= deg b, b nonzero)
Dense prem(Dense a, const Dense& b) {
  const BigInt& lb = b.back();
  while (true) {
    trim(a);
    if (a.empty() || a.size() < b.size()) return a;
    BigInt la = a.back();
    size_t shift = a.size() - b.size();
    for (auto& c : a) c *= lb;
    for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= la * b[i];
  }
}

}  // namespace

VPoly vpoly_gcd(const VPoly& a, const VPoly& b) {
  if (a.is_zero() && b.is_zero()) return VPoly();
  if (a.is_zero()) return vpoly_gcd(b, a);
  Dense x = to_dense(a.shifted(-a.min_exp()));
  make_primitive(x);
  if (b.is_zero()) return from_dense(x);
  Dense y = to_dense(b.shifted(-b.min_exp()));
  make_primitive(y);
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    Dense r = prem(x, y);
    make_primitive(r);
    x = std::move(y);
    y = std::move(r);
  }
  return from_dense(x);
}

QRat::QRat(const VPoly& num, const VPoly& den) : num_(num), den_(den) {
  canonicalize();
}

QRat QRat::from_big_rat(const BigRat& r) {
  return QRat(VPoly(BigInt(boost::multiprecision::numerator(r))),
              VPoly(BigInt(boost::multiprecision::denominator(r))));
}

// Canonical form: den != 0; if num == 0 then den == 1; otherwise
// gcd(num, den) is a unit, den has min_exp 0, positive leading coefficient,
// and content(num) is coprime to content(den).
void QRat::canonicalize() {
  if (den_.is_zero()) throw Error("QRat with zero denominator");
  if (num_.is_zero()) {
    den_ = VPoly(1);
    return;
  }
  // strip v-powers, divide the ordinary parts by their gcd
  int nshift = num_.min_exp(), dshift = den_.min_exp();
  VPoly n0 = num_.shifted(-nshift), d0 = den_.shifted(-dshift);
  VPoly g = vpoly_gcd(n0, d0);
  if (!(g == VPoly(1))) {
    n0 = n0.exact_div(g);
    d0 = d0.exact_div(g);
  }
  BigInt cn = n0.content(), cd = d0.content();
  BigInt cg = boost::multiprecision::gcd(cn, cd);
  if (cg > 1) {
    n0 = n0.exact_div(VPoly(cg));
    d0 = d0.exact_div(VPoly(cg));
  }
  if (d0.leading() < 0) {
    n0 = -n0;
    d0 = -d0;
  }
  num_ = n0.shifted(nshift - dshift);
  den_ = d0;
}

QRat QRat::operator-() const {
  QRat r = *this;
  r.num_ = -r.num_;
  return r;
}

QRat QRat::operator+(const QRat& o) const {
  return QRat(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

QRat QRat::operator-(const QRat& o) const { return *this + (-o); }

QRat QRat::operator*(const QRat& o) const {
  return QRat(num_ * o.num_, den_ * o.den_);
}

QRat QRat::operator/(const QRat& o) const {
  if (o.is_zero()) throw Error("QRat division by zero");
  return QRat(num_ * o.den_, den_ * o.num_);
}

QRat QRat::inverse() const {
  if (is_zero()) throw Error("QRat inverse of zero");
  return QRat(den_, num_);
}

QRat QRat::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  QRat r(1), b = *this;
  unsigned m = static_cast<unsigned>(n);
  while (m) {
    if (m & 1) r *= b;
    b *= b;
    m >>= 1;
  }
  return r;
}

const VPoly& QRat::as_vpoly() const {
  if (!is_vpoly()) throw Error("QRat is not a polynomial: " + str());
  return num_;
}

QRat QRat::adams(unsigned n) const {
  return QRat(num_.adams(n), den_.adams(n));
}

BigRat QRat::eval_q(const BigInt& q0) const {
  BigRat d = den_.eval_q(q0);
  if (d == 0) throw Error("eval_q: pole at q = " + q0.str());
  return num_.eval_q(q0) / d;
}

std::pair<BigRat, BigRat> QRat::eval_v(const BigInt& q0) const {
  auto [na, nb] = num_.eval_v(q0);
  auto [da, db] = den_.eval_v(q0);
  // 1/(da + db s) = (da - db s)/(da^2 - db^2 q0), s = sqrt(q0) irrational
  BigRat norm = da * da - db * db * BigRat(q0);
  if (norm == 0) throw Error("eval_v: pole (or square q0) at q = " + q0.str());
  BigRat ia = da / norm, ib = -db / norm;
  return {na * ia + nb * ib * BigRat(q0), na * ib + nb * ia};
}

std::string VPoly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // exponent-descending
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    BigInt c = it->second;
    int e = it->first;
    if (first) {
      if (c < 0) { out << "-"; c = -c; }
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    bool unit = (c == 1);
    if (e == 0) {
      out << c.str();
    } else {
      if (!unit) out << c.str() << "*";
      if (e == 2) out << "q";
      else if (e % 2 == 0) out << "q^" << (e / 2);
      else out << "q^(" << e << "/2)";
    }
  }
  return out.str();
}

namespace {
bool needs_parens(const VPoly& p) {
  if (p.terms().size() > 1) return true;
  return !p.is_zero() && p.leading() < 0;
}
}  // namespace

std::string QRat::str() const {
  if (is_vpoly()) return num_.str();
  std::string n = num_.str(), d = den_.str();
  if (needs_parens(num_)) n = "(" + n + ")";
  if (needs_parens(den_)) d = "(" + d + ")";
  return n + "/" + d;
}

VPoly quantum_int(unsigned n) {
  VPoly r;
  for (unsigned i = 0; i < n; ++i) r += VPoly::qpow(static_cast<int>(i));
  return r;
}

VPoly quantum_factorial(unsigned n) {
  VPoly r(1);
  for (unsigned i = 1; i <= n; ++i) r *= quantum_int(i);
  return r;
}

VPoly quantum_binomial(unsigned n, unsigned k) {
  if (k > n) return VPoly();
  VPoly num(1);
  for (unsigned i = 0; i < k; ++i) num *= quantum_int(n - i);
  return num.exact_div(quantum_factorial(k));
}

VPoly gl_order(unsigned n) {
  VPoly r(1);
  for (unsigned i = 0; i < n; ++i)
    r *= VPoly::qpow(static_cast<int>(n)) - VPoly::qpow(static_cast<int>(i));
  return r;
}

namespace {

// recursive-descent parser over QRat
struct Parser {
  const std::string& s;
  size_t i = 0;

  explicit Parser(const std::string& str) : s(str) {}

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) { ++i; return true; }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw Error("parse error at offset " + std::to_string(i) + ": " + what);
  }

  QRat parse() {
    QRat r = expr();
    skip();
    if (i != s.size()) fail("trailing input");
    return r;
  }

  QRat expr() {
    QRat r = term();
    while (true) {
      if (eat('+')) r += term();
      else if (eat('-')) r -= term();
      else return r;
    }
  }

  QRat term() {
    QRat r = unary();
    while (true) {
      if (eat('*')) r *= unary();
      else if (eat('/')) r /= unary();
      else return r;
    }
  }

  QRat unary() {
    if (eat('-')) return -unary();
    return primary();
  }

  long long integer() {
    skip();
    bool neg = eat('-');
    skip();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      fail("expected integer");
    long long v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      v = v * 10 + (s[i++] - '0');
    return neg ? -v : v;
  }

  // exponent of q as a multiple of 1/2, returned in v-units
  int vexponent() {
    skip();
    if (eat('(')) {
      long long a = integer();
      int ve;
      if (eat('/')) {
        long long b = integer();
        if (b != 2) fail("only halves allowed in exponents");
        ve = static_cast<int>(a);
      } else {
        ve = static_cast<int>(2 * a);
      }
      if (!eat(')')) fail("expected ')' in exponent");
      return ve;
    }
    return static_cast<int>(2 * integer());
  }

  QRat primary() {
    skip();
    if (i >= s.size()) fail("unexpected end of input");
    if (eat('(')) {
      QRat r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    char c = s[i];
    if (c == 'q' || c == 'v') {
      ++i;
      int scale = (c == 'q') ? 2 : 1;
      if (eat('^')) {
        if (c == 'q') return QRat(VPoly::vpow(vexponent()));
        return QRat(VPoly::vpow(static_cast<int>(integer())));
      }
      return QRat(VPoly::vpow(scale));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      BigInt v = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        v = v * 10 + (s[i++] - '0');
      return QRat(v);
    }
    fail("unexpected character");
  }
};

}  // namespace

QRat parse_qrat(const std::string& s) { return Parser(s).parse(); }

}  // namespace qhall
