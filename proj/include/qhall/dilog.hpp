#pragma once

/*
 * Quantum dilogarithm identities in the twisted character algebra.
 *
 * The ambient algebra is the quantum space of the quiver: monomials t^alpha
 * with the antisymmetric twist t^a t^b = v^{<b,a>-<a,b>} t^{a+b}.  The
 * quantum exponential of a single monomial,
 *
 *   E(x^delta) = exp_q(v/(q-1) x^delta),   exp_q(z) = sum_n z^n/[n]!,
 *
 * is the semistable series of a slope stratum whose only stable object is a
 * rigid brick of dimension delta.  Harder-Narasimhan factorization therefore
 * rewrites the full character integral
 *
 *   int chi = sum_alpha v^{<alpha,alpha>} r_alpha(q) t^alpha
 *
 * as an ordered product of E-factors, once for a slope function whose stables
 * are exactly the simples and once (finite representation type) for one whose
 * stables are all indecomposables.  Equating the two products is the quantum
 * dilogarithm identity of the quiver; for A_2 it is the pentagon identity.
 *
 * Everything here is a formal identity of series with coefficients in Q(v);
 * equality is exact coefficient equality up to the truncation degree.
 */

#include <string>
#include <vector>

#include "qhall/oracle.hpp"
#include "qhall/series.hpp"

namespace qhall {

// E(x^delta) on the antisymmetric rule, truncated by total degree.  The
// self-twist of x^delta vanishes, so the coefficient of t^{n delta} is the
// scalar v^n / prod_{k<=n} (q^k - 1).
GradedSeries quantum_exp(const Quiver& q, const DimVector& delta,
                         long long truncation);

// Ordered product of E(x^delta) factors, leftmost factor first.
GradedSeries quantum_exp_product(const Quiver& q,
                                 const std::vector<DimVector>& deltas,
                                 long long truncation);

// The direct character integral sum_alpha v^{<alpha,alpha>} r_alpha t^alpha
// over all alpha with |alpha| <= truncation.
GradedSeries character_series(const Quiver& q, long long truncation);

// Simple dimension vectors in increasing slope order: a topological order of
// the vertices, sources first, ties broken by vertex index.
std::vector<DimVector> simple_order(const Quiver& q);

// Dimension vectors of the indecomposables of a quiver of finite
// representation type, in an admissible order: Hom(E_i, E_j) = 0 for i > j
// and Ext(E_i, E_j) = 0 for i <= j.  This is the left-to-right reading of
// the Auslander-Reiten quiver, realized on F_2 models: nonzero Hom spaces
// orient a dag on the indecomposables, and both vanishing patterns are
// checked before returning.  Ties between Hom-incomparable entries go to the
// smaller total dimension, then lexicographically.
std::vector<DimVector> dynkin_indecomposables(const Quiver& q,
                                              OracleBudget& budget);
std::vector<DimVector> dynkin_indecomposables(
    char type, int rank, const std::vector<bool>& orientation = {});

struct DilogReport {
  bool ok = false;             // all three series agree to the truncation
  bool simples_match = false;  // simple-order product == character integral
  bool indec_match = false;    // indecomposable product == character integral
  std::string first_diff;      // first differing coefficient when !ok
};

// Three-way check of the dilogarithm identity on a Dynkin quiver: the product
// over the simples, the product over the indecomposables, and the character
// integral must agree coefficientwise up to the truncation.
DilogReport verify_dynkin_identity(char type, int rank,
                                   const std::vector<bool>& orientation = {},
                                   long long truncation = 6);

}  // namespace qhall
