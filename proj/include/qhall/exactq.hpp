#ifndef QHALL_EXACTQ_HPP
#define QHALL_EXACTQ_HPP

/**
 * Exact arithmetic in the half-integer power ring Z[v, v^-1], v = q^(1/2),
 * and its fraction field.  All counting identities in this project are
 * checked exactly; there are no floating point numbers anywhere downstream.
 *
 * VPoly  - Laurent polynomial in v with arbitrary-precision integer
 *          coefficients.  Exponents are exponents of v, so q^k is v^(2k).
 * QRat   - quotient num/den of two VPoly in canonical reduced form.
 *
 * Rendering uses q-notation: v^(2k) prints as q^k, odd powers print as
 * q^(k/2).  parse_qrat accepts the same grammar plus +,-,*,/ and parens.
 */

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qhall {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Base error for this library; CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
  explicit Error(const std::string& m) : std::runtime_error(m) {}
};
// Raised when an enumeration would exceed the configured point budget.
struct BudgetError : Error {
  explicit BudgetError(const std::string& m) : Error(m) {}
};

class VPoly {
 public:
  VPoly() = default;
  VPoly(long long c) { if (c != 0) c_[0] = c; }
  VPoly(const BigInt& c) { if (c != 0) c_[0] = c; }

  static VPoly monomial(const BigInt& coeff, int vexp);
  // q^k as a VPoly (k may be negative).
  static VPoly qpow(int k) { return monomial(1, 2 * k); }
  static VPoly vpow(int k) { return monomial(1, k); }

  bool is_zero() const { return c_.empty(); }
  bool operator==(const VPoly& o) const { return c_ == o.c_; }
  bool operator!=(const VPoly& o) const { return !(*this == o); }

  // Exponent range; calling on zero is an error.
  int min_exp() const;
  int max_exp() const;
  const BigInt& leading() const;          // coefficient of max_exp
  BigInt coeff(int vexp) const;
  const std::map<int, BigInt>& terms() const { return c_; }
  void set_coeff(int vexp, const BigInt& c);

  VPoly operator-() const;
  VPoly operator+(const VPoly& o) const;
  VPoly operator-(const VPoly& o) const;
  VPoly operator*(const VPoly& o) const;
  VPoly& operator+=(const VPoly& o) { *this = *this + o; return *this; }
  VPoly& operator-=(const VPoly& o) { *this = *this - o; return *this; }
  VPoly& operator*=(const VPoly& o) { *this = *this * o; return *this; }

  VPoly shifted(int vexp) const;          // multiply by v^vexp
  VPoly pow(unsigned n) const;

  // Substitute v -> v^n (Adams operation on coefficients).
  VPoly adams(unsigned n) const;

  BigInt content() const;                 // gcd of coefficients, >= 0
  bool all_even() const;                  // only integer powers of q
  bool nonneg_coeffs() const;

  // Exact division; throws Error if o does not divide *this.
  VPoly exact_div(const VPoly& o) const;

  // Evaluate at v^2 = q0 (integer powers only; throws on odd exponents).
  BigRat eval_q(const BigInt& q0) const;
  // Evaluate at v = sqrt(q0) exactly: returns (a, b) meaning a + b*sqrt(q0).
  std::pair<BigRat, BigRat> eval_v(const BigInt& q0) const;

  std::string str() const;                // q-notation rendering

 private:
  // invariant: no zero coefficients stored
  std::map<int, BigInt> c_;
};

// gcd of Laurent polynomials up to units +-v^k: result is an ordinary
// polynomial, primitive, positive leading coefficient, nonzero constant term.
VPoly vpoly_gcd(const VPoly& a, const VPoly& b);

class QRat {
 public:
  QRat() : num_(), den_(1) {}
  QRat(long long c) : num_(c), den_(1) {}
  QRat(const BigInt& c) : num_(c), den_(1) {}
  QRat(const VPoly& p) : num_(p), den_(1) {}
  QRat(const VPoly& num, const VPoly& den);
  static QRat from_big_rat(const BigRat& r);

  const VPoly& num() const { return num_; }
  const VPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  // equality is structural; canonical form makes that sound
  bool operator==(const QRat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const QRat& o) const { return !(*this == o); }

  QRat operator-() const;
  QRat operator+(const QRat& o) const;
  QRat operator-(const QRat& o) const;
  QRat operator*(const QRat& o) const;
  QRat operator/(const QRat& o) const;
  QRat& operator+=(const QRat& o) { *this = *this + o; return *this; }
  QRat& operator-=(const QRat& o) { *this = *this - o; return *this; }
  QRat& operator*=(const QRat& o) { *this = *this * o; return *this; }
  QRat& operator/=(const QRat& o) { *this = *this / o; return *this; }

  QRat inverse() const;
  QRat pow(int n) const;

  bool is_vpoly() const { return den_ == VPoly(1); }
  const VPoly& as_vpoly() const;          // throws if not polynomial
  // substitute v -> v^n
  QRat adams(unsigned n) const;

  BigRat eval_q(const BigInt& q0) const;  // throws on odd v-powers or pole
  // exact value in Q(sqrt(q0)) as (a, b) = a + b*sqrt(q0); q0 must not be a square
  std::pair<BigRat, BigRat> eval_v(const BigInt& q0) const;

  std::string str() const;

 private:
  void canonicalize();
  VPoly num_, den_;  // canonical: see exactq.cpp
};

// q-combinatorics (all ordinary polynomials in q).
VPoly quantum_int(unsigned n);                 // [n]_q = 1 + q + ... + q^(n-1)
VPoly quantum_factorial(unsigned n);
VPoly quantum_binomial(unsigned n, unsigned k);
VPoly gl_order(unsigned n);                    // |GL_n(F_q)|

// Parse the rendered grammar (integers, q, v, ^, parens, + - * /).
QRat parse_qrat(const std::string& s);

}  // namespace qhall

#endif
