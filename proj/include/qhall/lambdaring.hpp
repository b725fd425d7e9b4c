#ifndef QHALL_LAMBDARING_HPP
#define QHALL_LAMBDARING_HPP

/**
 * Lambda-ring operations on untwisted graded series and the generating
 * series R, A, M of a fixed slope:
 *
 *   psi_n(f(q, x)) = f(q^n, x^n)        (GradedSeries::adams)
 *   Exp(f) = exp(sum_k psi_k(f)/k)      constant term 0 required
 *   Log(f) = sum_k (mobius(k)/k) psi_k(log(f))   constant term 1 required
 *
 * All products inside Exp and Log are the usual ones, so both operations
 * demand the untwisted rule.  The semistable series R of one slope lives in
 * the twisted character algebra; its inverse is transported coefficient by
 * coefficient to the untwisted algebra before Log is applied:
 *
 *   A = (1-q) Log(R^{-1})    (absolute series, counts absolutely stables)
 *   M = Exp(A)               (relative series, counts moduli points)
 *
 * Both A and M must have integer polynomial coefficients in q; a
 * non-polynomial coefficient signals a convention bug upstream and throws.
 */

#include "qhall/count.hpp"
#include "qhall/exactq.hpp"
#include "qhall/quiver.hpp"
#include "qhall/series.hpp"

namespace qhall {

// Exp(f) = exp(sum_{k>=1} psi_k(f)/k); f untwisted with constant term 0
GradedSeries exp_op(const GradedSeries& f);
// Log(f) = sum_{k>=1} (mobius(k)/k) psi_k(log(f)); constant term 1
GradedSeries log_op(const GradedSeries& f);

struct ModuliSeries {
  GradedSeries semistable;  // R: 1 + sum of r^ss_alpha x^alpha at the slope
  GradedSeries absolute;    // A: a_alpha x^alpha, constant term 0
  GradedSeries relative;    // M: 1 + m_alpha x^alpha = Exp(A)
};

// all alpha with mu(alpha) = mu0 and |alpha| <= truncation
ModuliSeries moduli_series(const Quiver& q, const Stability& st,
                           const Slope& mu0, long long truncation);

// specialization at q = 1 of a counting polynomial
BigInt euler_characteristic(const VPoly& m);

}  // namespace qhall

#endif
