#ifndef QHALL_QUIVER_HPP
#define QHALL_QUIVER_HPP

/**
 * Quivers, dimension vectors, Euler form, and slope stability data.
 *
 * A quiver is an ordered list of vertices plus arrows with multiplicity.
 * The Euler matrix is E[u][v] = delta_uv - #(arrows u -> v), so the additive
 * Euler form is <a,b> = a E b^T = sum_v a(v)b(v) - sum_arrows a(ta)b(ha).
 * Slopes mu = sigma/theta are compared exactly by cross multiplication.
 */

#include "qhall/exactq.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qhall {

using DimVector = std::vector<int>;
using Weight = std::vector<int>;

struct Arrow {
  int tail = 0;
  int head = 0;
};

class Quiver {
 public:
  Quiver() = default;
  Quiver(int vertices, std::vector<Arrow> arrows);

  int num_vertices() const { return n_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  // multiplicity-expanded arrow count u -> v
  int arrow_count(int u, int v) const;
  bool is_acyclic() const;

  // Euler matrix row-major; <a,b> = a E b^T
  const std::vector<std::vector<int>>& euler_matrix() const { return euler_; }
  long long euler_form(const DimVector& a, const DimVector& b) const;
  // dim Rep_a = sum_arrows a(ta) a(ha)
  long long rep_dim(const DimVector& a) const;

  // vertex names as given in the input (defaults to 1..n)
  const std::vector<std::string>& names() const { return names_; }
  void set_names(std::vector<std::string> names);

  std::string canonical_string() const;  // stable serialization for hashing

 private:
  int n_ = 0;
  std::vector<Arrow> arrows_;
  std::vector<std::vector<int>> euler_;
  std::vector<std::string> names_;
};

// exact rational slope sigma(a)/theta(a); theta positive on nonzero vectors
class Slope {
 public:
  Slope() : num_(0), den_(1) {}
  Slope(long long num, long long den);
  long long num() const { return num_; }
  long long den() const { return den_; }
  bool operator==(const Slope& o) const {
    return num_ * o.den_ == o.num_ * den_;
  }
  bool operator!=(const Slope& o) const { return !(*this == o); }
  bool operator<(const Slope& o) const {
    return num_ * o.den_ < o.num_ * den_;
  }
  bool operator>(const Slope& o) const { return o < *this; }
  bool operator<=(const Slope& o) const { return !(o < *this); }
  bool operator>=(const Slope& o) const { return !(*this < o); }
  std::string str() const;

 private:
  long long num_, den_;  // den > 0, reduced
};

struct Stability {
  Weight sigma;
  Weight theta;  // all entries positive
};

// dimension vector helpers
DimVector dim_add(const DimVector& a, const DimVector& b);
DimVector dim_sub(const DimVector& a, const DimVector& b);
bool dim_is_zero(const DimVector& a);
bool dim_leq(const DimVector& a, const DimVector& b);  // componentwise
bool dim_nonneg(const DimVector& a);
long long dim_total(const DimVector& a);
long long weight_pair(const Weight& w, const DimVector& a);

// mu(a) = sigma(a)/theta(a); requires a nonzero and theta positive
Slope slope_of(const Stability& st, const DimVector& a);
void validate_stability(const Quiver& q, const Stability& st);

// no nonzero proper gamma <= alpha has mu(gamma) = mu(alpha)
bool coprime_check(const Quiver& q, const Stability& st, const DimVector& alpha);

// all gamma with 0 <= gamma <= alpha componentwise, lexicographic order
std::vector<DimVector> subvectors(const DimVector& alpha);

// Quiver file format:
//   vertices: 1 2 3
//   arrows: 1->2 *4, 2->3
//   sigma: 4 -3        (optional)
//   theta: 1 1 1       (optional, defaults to all ones)
// '#' starts a comment.  parse_quiver_json accepts the JSON equivalent
// {"vertices": [...], "arrows": [{"tail":..,"head":..,"mult":..}], ...}.
struct QuiverInput {
  Quiver quiver;
  bool has_sigma = false;
  Stability stability;  // theta defaults to all ones
};
QuiverInput parse_quiver_text(const std::string& text);
QuiverInput parse_quiver_json(const std::string& text);
QuiverInput parse_quiver_any(const std::string& text);
std::string quiver_to_json(const QuiverInput& in);

// standard constructions
Quiver kronecker_quiver(int arrows);                      // K_m: 1 -> 2, m arrows
Quiver linear_quiver(int n);                              // A_n equioriented 1->2->...->n
// Dynkin quiver of the given type with orientation bits, one per edge in the
// standard edge listing (true = low-numbered endpoint is the tail).
Quiver dynkin_quiver(char type, int rank, const std::vector<bool>& orientation);

// positive roots of the underlying ADE diagram (dim vectors with Tits form 1)
std::vector<DimVector> positive_roots(const Quiver& q);

}  // namespace qhall

#endif
