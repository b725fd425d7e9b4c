#ifndef QHALL_COUNT_HPP
#define QHALL_COUNT_HPP

/**
 * Harder-Narasimhan inversion and the closed point counts it yields.
 *
 * The HN filtration gives, slice by slice in each dimension vector beta,
 *   chi_beta = sum chi^ss_{a_1} ... chi^ss_{a_s}
 * over decompositions with mu(a_1) < ... < mu(a_s), products taken in the
 * twisted character algebra of the chosen arity.  HNSolver inverts this
 * triangular system by memoized recursion; the chunks it produces carry
 *   - moduli masses r^ss_alpha            (arity 1),
 *   - Grassmannian masses r^ss_{beta,gamma} (arity 2, key [gamma | beta]),
 *   - flag masses                          (arity t, innermost step first).
 * When alpha is coprime to the slope, (q-1) * mass is an integer polynomial
 * counting the rational points of the projective moduli (nonnegative
 * coefficients if the quiver is acyclic).
 *
 * transfer_matrix_grassmannian computes the arity-2 mass by a path sum in a
 * unitriangular matrix instead of the recursion; the two must agree.  The
 * node set is {(a', g') : mu(a') < mu(alpha), 0 <= g' <= min(a', gamma)}
 * with (0, 0) and (alpha, gamma) adjoined; the bound on g' is taken
 * non-strict, and the answer is the path-signed inverse entry from (0, 0)
 * to (alpha, gamma), sign-normalized.
 */

#include "qhall/exactq.hpp"
#include "qhall/quiver.hpp"
#include "qhall/series.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace qhall {

struct HNProblem {
  Quiver quiver;
  Stability stability;
  DimVector target;
  int character_arity = 1;  // 1 single, 2 double, t >= 2 flag arity
};

struct CountResult {
  QRat raw;                         // semistable mass r^ss
  std::optional<VPoly> normalized;  // (q-1) raw when an integer q-polynomial
  bool coprime = false;
  bool nonneg = false;  // normalized present with nonnegative coefficients

  bool operator==(const CountResult& o) const;
  bool operator!=(const CountResult& o) const { return !(*this == o); }
  std::string to_json() const;
  static CountResult from_json(const std::string& text);
};

// (q-1) * raw as a polynomial in q with integer coefficients, if it is one
std::optional<VPoly> normalized_count(const QRat& raw);

/**
 * Memoized solver for the semistable chunks of one character arity.  A chunk
 * maps flattened arity-part keys with a fixed vector sum to their masses.
 * Thread-safe; concurrent lookups insert idempotently.
 */
class HNSolver {
 public:
  using Chunk = std::map<SeriesKey, QRat>;

  HNSolver(const Quiver& q, const Stability& st, int arity);

  const Quiver& quiver() const { return quiver_; }
  const Stability& stability() const { return stability_; }
  int arity() const { return arity_; }
  const TwistRule& rule() const { return *rule_; }

  // image of chi_beta: all splittings of the full stack of dimension beta
  const Chunk& full_chunk(const DimVector& beta);
  // image of chi^ss_beta under the same character; beta nonzero
  const Chunk& semistable_chunk(const DimVector& beta);
  // the alternating-sum form of the same chunk: sum over decompositions
  // with prefix slopes < mu(beta) of (-1)^(s-1) chi_{a_1}...chi_{a_s}.
  // Exponential in |beta|; kept as an independent cross-check.
  Chunk semistable_chunk_alternating(const DimVector& beta);

 private:
  Chunk chunk_mul(const Chunk& x, const Chunk& y) const;
  // ordered products of semistable chunks with slopes strictly above floor
  const Chunk& tail_chunk(const Slope& floor, const DimVector& delta);
  const Chunk& semistable_chunk_locked(const DimVector& beta);

  Quiver quiver_;
  Stability stability_;
  int arity_;
  TwistRulePtr rule_;
  std::map<DimVector, Chunk> full_;
  std::map<DimVector, Chunk> ss_;
  std::map<std::pair<Slope, DimVector>, Chunk> tails_;
  std::recursive_mutex mutex_;
};

// all semistable chunks with |beta| <= truncation assembled into one series
// (constant term 1); truncation must cover |target|
GradedSeries semistable_series(const HNProblem& problem, long long truncation);

/**
 * Disk cache for count results.  Keys carry a code version tag, the quiver,
 * the stability, and the full query; values are CountResult JSON.  Files are
 * named by FNV-1a hash of the key with the key stored alongside the value,
 * so a hit is returned only for an exact key match.
 */
class CountCache {
 public:
  explicit CountCache(std::string dir);  // empty dir disables the cache
  static CountCache from_env();          // QHALL_CACHE_DIR, else disabled

  bool enabled() const { return !dir_.empty(); }
  const std::string& dir() const { return dir_; }
  std::optional<std::string> lookup(const std::string& key) const;
  void store(const std::string& key, const std::string& value) const;

 private:
  std::string dir_;
};

// cache keys used by the count operations (exposed for tests)
std::string moduli_cache_key(const Quiver& q, const Stability& st,
                             const DimVector& alpha);
std::string grassmannian_cache_key(const Quiver& q, const Stability& st,
                                   const DimVector& alpha,
                                   const DimVector& gamma);
std::string flag_cache_key(const Quiver& q, const Stability& st,
                           const std::vector<DimVector>& parts);

// raw = r^ss_alpha; alpha nonzero
CountResult moduli_count(const Quiver& q, const Stability& st,
                         const DimVector& alpha,
                         const CountCache* cache = nullptr);
// raw = r^ss_{alpha-gamma,gamma}, the mass of pairs (M semistable, U in
// Gr_gamma(M)); 0 <= gamma <= alpha
CountResult grassmannian_moduli_count(const Quiver& q, const Stability& st,
                                      const DimVector& alpha,
                                      const DimVector& gamma,
                                      const CountCache* cache = nullptr);
// raw = mass of chains 0 = U_0 <= ... <= U_t = M with M semistable and
// dim(U_i/U_{i-1}) = parts[i-1]; parts[0] is the innermost step
CountResult flag_moduli_count(const Quiver& q, const Stability& st,
                              const std::vector<DimVector>& parts,
                              const CountCache* cache = nullptr);

// r^ss_{alpha-gamma,gamma} again, by the transfer-matrix path sum
QRat transfer_matrix_grassmannian(const Quiver& q, const Stability& st,
                                  const DimVector& alpha,
                                  const DimVector& gamma);

}  // namespace qhall

#endif
