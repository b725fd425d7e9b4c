#include "qhall/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace qhall {

namespace {

constexpr long long kGlEnumerationCap = 2'000'000;

int mod_inverse(int x, int p) {
  x %= p;
  for (int y = 1; y < p; ++y)
    if (x * y % p == 1) return y;
  throw Error("element not invertible mod " + std::to_string(p));
}

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) {
    if (r > (1LL << 62) / std::max<long long>(b, 1)) throw Error("power overflows");
    r *= b;
  }
  return r;
}

}  // namespace

OracleBudget::OracleBudget(long long limit) : limit_(limit), used_(0) {
  if (limit <= 0) throw Error("oracle budget must be positive");
}

OracleBudget OracleBudget::from_env() {
  const char* s = std::getenv("QHALL_ORACLE_BUDGET");
  if (s == nullptr) return OracleBudget(1LL << 24);
  char* end = nullptr;
  long long v = std::strtoll(s, &end, 10);
  if (end == s || *end != '\0' || v <= 0)
    throw Error("QHALL_ORACLE_BUDGET must be a positive integer");
  return OracleBudget(v);
}

void OracleBudget::charge(long long cost) {
  if (cost < 0) throw Error("negative budget charge");
  used_ += cost;
  if (used_ > limit_)
    throw BudgetError("oracle budget exceeded: " + std::to_string(used_) + " > " +
                      std::to_string(limit_));
}

FpMat FpMat::zero(int r, int c) {
  FpMat m;
  m.rows = r;
  m.cols = c;
  m.a.assign((size_t)r * c, 0);
  return m;
}

FpMat FpMat::identity(int n) {
  FpMat m = zero(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

FpMat FpMat::from_rows(const std::vector<std::vector<int>>& rows, int p) {
  FpMat m = zero((int)rows.size(), rows.empty() ? 0 : (int)rows[0].size());
  for (int i = 0; i < m.rows; ++i) {
    if ((int)rows[i].size() != m.cols) throw Error("ragged matrix literal");
    for (int j = 0; j < m.cols; ++j)
      m.at(i, j) = (uint8_t)(((rows[i][j] % p) + p) % p);
  }
  return m;
}

FpMat fp_mul(const FpMat& x, const FpMat& y, int p) {
  if (x.cols != y.rows) throw Error("matrix shape mismatch in product");
  FpMat r = FpMat::zero(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      int xv = x.at(i, k);
      if (xv == 0) continue;
      for (int j = 0; j < y.cols; ++j)
        r.at(i, j) = (uint8_t)((r.at(i, j) + xv * y.at(k, j)) % p);
    }
  return r;
}

FpMat fp_add(const FpMat& x, const FpMat& y, int p) {
  if (x.rows != y.rows || x.cols != y.cols) throw Error("matrix shape mismatch in sum");
  FpMat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = (uint8_t)((r.a[i] + y.a[i]) % p);
  return r;
}

FpMat fp_sub(const FpMat& x, const FpMat& y, int p) {
  if (x.rows != y.rows || x.cols != y.cols) throw Error("matrix shape mismatch in difference");
  FpMat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = (uint8_t)((r.a[i] + p - y.a[i]) % p);
  return r;
}

int fp_rref(FpMat& m, int p) {
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < m.rows; ++r)
      if (m.at(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m.at(rank, j), m.at(pivot, j));
    int inv = mod_inverse(m.at(rank, col), p);
    for (int j = 0; j < m.cols; ++j) m.at(rank, j) = (uint8_t)(m.at(rank, j) * inv % p);
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank) continue;
      int f = m.at(r, col);
      if (f == 0) continue;
      for (int j = 0; j < m.cols; ++j)
        m.at(r, j) = (uint8_t)((m.at(r, j) + (p - f) * m.at(rank, j)) % p);
    }
    ++rank;
  }
  return rank;
}

int fp_rank(FpMat m, int p) { return fp_rref(m, p); }

FpMat fp_kernel(const FpMat& m, int p) {
  FpMat r = m;
  int rank = fp_rref(r, p);
  std::vector<int> pivot_col(rank);
  std::vector<bool> is_pivot(m.cols, false);
  for (int i = 0; i < rank; ++i) {
    int j = 0;
    while (r.at(i, j) == 0) ++j;
    pivot_col[i] = j;
    is_pivot[j] = true;
  }
  FpMat k = FpMat::zero(m.cols - rank, m.cols);
  int row = 0;
  for (int j = 0; j < m.cols; ++j) {
    if (is_pivot[j]) continue;
    k.at(row, j) = 1;
    for (int i = 0; i < rank; ++i)
      k.at(row, pivot_col[i]) = (uint8_t)((p - r.at(i, j)) % p);
    ++row;
  }
  return k;
}

FpMat fp_inverse(const FpMat& m, int p) {
  if (m.rows != m.cols) throw Error("inverse of non-square matrix");
  int n = m.rows;
  FpMat aug = FpMat::zero(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  if (fp_rref(aug, p) != n) throw Error("matrix is singular");
  FpMat inv = FpMat::zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

bool fp_in_rowspace(const FpMat& rref, std::vector<uint8_t> v, int p) {
  if ((int)v.size() != rref.cols) throw Error("vector length mismatch");
  for (int i = 0; i < rref.rows; ++i) {
    int j = 0;
    while (j < rref.cols && rref.at(i, j) == 0) ++j;
    if (j == rref.cols) continue;
    int f = v[j];
    if (f == 0) continue;
    for (int c = j; c < rref.cols; ++c)
      v[c] = (uint8_t)((v[c] + (p - f) * rref.at(i, c)) % p);
  }
  return std::all_of(v.begin(), v.end(), [](uint8_t x) { return x == 0; });
}

FpRep zero_rep(const Quiver& q, const DimVector& alpha, int p) {
  FpRep m;
  m.quiver = &q;
  m.p = p;
  m.dim = alpha;
  for (const Arrow& a : q.arrows())
    m.mats.push_back(FpMat::zero(alpha[a.head], alpha[a.tail]));
  return m;
}

FpRep direct_sum(const FpRep& x, const FpRep& y) {
  if (x.quiver != y.quiver || x.p != y.p) throw Error("direct sum of mismatched reps");
  FpRep s = zero_rep(*x.quiver, dim_add(x.dim, y.dim), x.p);
  for (size_t a = 0; a < s.mats.size(); ++a) {
    const FpMat& xm = x.mats[a];
    const FpMat& ym = y.mats[a];
    for (int i = 0; i < xm.rows; ++i)
      for (int j = 0; j < xm.cols; ++j) s.mats[a].at(i, j) = xm.at(i, j);
    for (int i = 0; i < ym.rows; ++i)
      for (int j = 0; j < ym.cols; ++j)
        s.mats[a].at(xm.rows + i, xm.cols + j) = ym.at(i, j);
  }
  return s;
}

long long rep_entry_count(const Quiver& q, const DimVector& alpha) {
  long long n = 0;
  for (const Arrow& a : q.arrows()) n += (long long)alpha[a.head] * alpha[a.tail];
  return n;
}

FpRep decode_rep(const Quiver& q, const DimVector& alpha, int p, long long index) {
  FpRep m = zero_rep(q, alpha, p);
  for (auto& mat : m.mats)
    for (auto& e : mat.a) {
      e = (uint8_t)(index % p);
      index /= p;
    }
  if (index != 0) throw Error("representation index out of range");
  return m;
}

long long encode_rep(const FpRep& m) {
  long long index = 0;
  long long base = 1;
  for (const auto& mat : m.mats)
    for (uint8_t e : mat.a) {
      if (base > (1LL << 61) / m.p) throw Error("representation too large to encode");
      index += base * e;
      base *= m.p;
    }
  return index;
}

BigInt gl_count(int n, int p) {
  BigInt r = 1, pn = 1;
  for (int i = 0; i < n; ++i) pn *= p;
  BigInt pi = 1;
  for (int i = 0; i < n; ++i) {
    r *= pn - pi;
    pi *= p;
  }
  return r;
}

namespace {

struct GlCache {
  std::vector<FpMat> elements;
  std::vector<FpMat> inverses;
};

GlCache& gl_cache(int n, int p) {
  static std::map<std::pair<int, int>, GlCache> cache;
  auto key = std::make_pair(n, p);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  long long total = ipow(p, n * n);
  if (total > kGlEnumerationCap)
    throw Error("GL(" + std::to_string(n) + ", F_" + std::to_string(p) +
                ") is too large to enumerate");
  GlCache c;
  for (long long idx = 0; idx < total; ++idx) {
    FpMat m = FpMat::zero(n, n);
    long long x = idx;
    for (auto& e : m.a) {
      e = (uint8_t)(x % p);
      x /= p;
    }
    if (n > 0 && fp_rank(m, p) != n) continue;
    FpMat orig = FpMat::zero(n, n);
    x = idx;
    for (auto& e : orig.a) {
      e = (uint8_t)(x % p);
      x /= p;
    }
    c.inverses.push_back(fp_inverse(orig, p));
    c.elements.push_back(std::move(orig));
  }
  if (n == 0) {
    c.elements.assign(1, FpMat::zero(0, 0));
    c.inverses.assign(1, FpMat::zero(0, 0));
  }
  return cache.emplace(key, std::move(c)).first->second;
}

}  // namespace

const std::vector<FpMat>& gl_elements(int n, int p) { return gl_cache(n, p).elements; }
const std::vector<FpMat>& gl_element_inverses(int n, int p) { return gl_cache(n, p).inverses; }

const std::vector<FpMat>& subspaces(int n, int k, int p) {
  static std::map<std::tuple<int, int, int>, std::vector<FpMat>> cache;
  auto key = std::make_tuple(n, k, p);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (k < 0 || k > n) throw Error("subspace dimension out of range");
  std::vector<FpMat> out;
  // enumerate RREF patterns by pivot columns, then fill free entries
  std::vector<int> pivots(k);
  std::iota(pivots.begin(), pivots.end(), 0);
  auto next_combination = [&]() {
    for (int i = k - 1; i >= 0; --i) {
      if (pivots[i] < n - (k - i)) {
        ++pivots[i];
        for (int j = i + 1; j < k; ++j) pivots[j] = pivots[j - 1] + 1;
        return true;
      }
    }
    return false;
  };
  do {
    std::vector<bool> is_pivot(n, false);
    for (int j : pivots) is_pivot[j] = true;
    std::vector<std::pair<int, int>> free_pos;
    for (int i = 0; i < k; ++i)
      for (int j = pivots[i] + 1; j < n; ++j)
        if (!is_pivot[j]) free_pos.emplace_back(i, j);
    long long total = ipow(p, (int)free_pos.size());
    for (long long idx = 0; idx < total; ++idx) {
      FpMat m = FpMat::zero(k, n);
      for (int i = 0; i < k; ++i) m.at(i, pivots[i]) = 1;
      long long x = idx;
      for (auto [i, j] : free_pos) {
        m.at(i, j) = (uint8_t)(x % p);
        x /= p;
      }
      out.push_back(std::move(m));
    }
  } while (k > 0 && next_combination());
  return cache.emplace(key, std::move(out)).first->second;
}

namespace {

// matrix of phi -> (B_a phi_tail - phi_head A_a); columns index the entries
// of (phi_v), rows the entries of tuples indexed by arrows
struct HomMatrix {
  FpMat d;
  std::vector<int> col_base;  // per vertex
  std::vector<int> row_base;  // per arrow
  int phi_dim = 0, z_dim = 0;
};

HomMatrix build_hom_matrix(const FpRep& a, const FpRep& b) {
  if (a.quiver != b.quiver || a.p != b.p) throw Error("hom of mismatched reps");
  const Quiver& q = *a.quiver;
  const int n = q.num_vertices();
  HomMatrix h;
  h.col_base.resize(n);
  for (int v = 0; v < n; ++v) {
    h.col_base[v] = h.phi_dim;
    h.phi_dim += b.dim[v] * a.dim[v];  // phi_v : a_v -> b_v, a b_v x a_v matrix
  }
  h.row_base.resize(q.arrows().size());
  for (size_t ar = 0; ar < q.arrows().size(); ++ar) {
    h.row_base[ar] = h.z_dim;
    h.z_dim += b.dim[q.arrows()[ar].head] * a.dim[q.arrows()[ar].tail];
  }
  h.d = FpMat::zero(h.z_dim, h.phi_dim);
  const int p = a.p;
  for (size_t ar = 0; ar < q.arrows().size(); ++ar) {
    const Arrow& arrow = q.arrows()[ar];
    const FpMat& ba = b.mats[ar];
    const FpMat& aa = a.mats[ar];
    int at = a.dim[arrow.tail];
    for (int r = 0; r < b.dim[arrow.head]; ++r)
      for (int c = 0; c < at; ++c) {
        int row = h.row_base[ar] + r * at + c;
        // + B_a[r][k] phi_tail[k][c]
        for (int k = 0; k < b.dim[arrow.tail]; ++k) {
          int col = h.col_base[arrow.tail] + k * a.dim[arrow.tail] + c;
          h.d.at(row, col) = (uint8_t)((h.d.at(row, col) + ba.at(r, k)) % p);
        }
        // - phi_head[r][k] A_a[k][c]
        for (int k = 0; k < a.dim[arrow.head]; ++k) {
          int col = h.col_base[arrow.head] + r * a.dim[arrow.head] + k;
          h.d.at(row, col) = (uint8_t)((h.d.at(row, col) + p - aa.at(k, c)) % p);
        }
      }
  }
  return h;
}

}  // namespace

int hom_dim(const FpRep& a, const FpRep& b) {
  HomMatrix h = build_hom_matrix(a, b);
  int rank = fp_rank(h.d, a.p);
  int hom = h.phi_dim - rank;
  int ext = h.z_dim - rank;
  if (hom - ext != (int)a.quiver->euler_form(a.dim, b.dim))
    throw Error("hom - ext does not match the Euler form");
  return hom;
}

int ext_dim(const FpRep& a, const FpRep& b) {
  HomMatrix h = build_hom_matrix(a, b);
  return h.z_dim - fp_rank(h.d, a.p);
}

std::vector<std::vector<FpMat>> hom_basis(const FpRep& a, const FpRep& b) {
  HomMatrix h = build_hom_matrix(a, b);
  FpMat k = fp_kernel(h.d, a.p);
  const Quiver& q = *a.quiver;
  std::vector<std::vector<FpMat>> basis;
  for (int r = 0; r < k.rows; ++r) {
    std::vector<FpMat> phi;
    for (int v = 0; v < q.num_vertices(); ++v) {
      FpMat m = FpMat::zero(b.dim[v], a.dim[v]);
      for (size_t i = 0; i < m.a.size(); ++i) m.a[i] = k.at(r, h.col_base[v] + (int)i);
      phi.push_back(std::move(m));
    }
    basis.push_back(std::move(phi));
  }
  return basis;
}

bool is_isomorphic(const FpRep& a, const FpRep& b, OracleBudget& budget) {
  if (a.dim != b.dim) return false;
  if (rep_entry_count(*a.quiver, a.dim) == 0) return true;  // only the zero rep
  auto basis = hom_basis(a, b);
  int h = (int)basis.size();
  long long total = ipow(a.p, h);
  budget.charge(total);
  const Quiver& q = *a.quiver;
  const int p = a.p;
  std::vector<int> digits(h, 0);
  for (long long idx = 1; idx < total; ++idx) {
    int pos = 0;
    while (true) {
      if (++digits[pos] < p) break;
      digits[pos++] = 0;
    }
    bool ok = true;
    for (int v = 0; v < q.num_vertices() && ok; ++v) {
      FpMat phi = FpMat::zero(b.dim[v], a.dim[v]);
      for (int t = 0; t < h; ++t) {
        if (digits[t] == 0) continue;
        for (size_t i = 0; i < phi.a.size(); ++i)
          phi.a[i] = (uint8_t)((phi.a[i] + digits[t] * basis[t][v].a[i]) % p);
      }
      if (phi.rows != phi.cols || fp_rank(phi, p) != phi.rows) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

bool is_indecomposable(const FpRep& m, OracleBudget& budget) {
  if (dim_is_zero(m.dim)) return false;
  auto basis = hom_basis(m, m);
  int h = (int)basis.size();
  long long total = ipow(m.p, h);
  budget.charge(total);
  const Quiver& q = *m.quiver;
  const int p = m.p;
  // decomposable iff End contains an idempotent other than 0 and 1
  std::vector<int> digits(h, 0);
  for (long long idx = 1; idx < total; ++idx) {
    int pos = 0;
    while (true) {
      if (++digits[pos] < p) break;
      digits[pos++] = 0;
    }
    bool idempotent = true, is_one = true;
    for (int v = 0; v < q.num_vertices() && idempotent; ++v) {
      FpMat phi = FpMat::zero(m.dim[v], m.dim[v]);
      for (int t = 0; t < h; ++t) {
        if (digits[t] == 0) continue;
        for (size_t i = 0; i < phi.a.size(); ++i)
          phi.a[i] = (uint8_t)((phi.a[i] + digits[t] * basis[t][v].a[i]) % p);
      }
      if (fp_mul(phi, phi, p) != phi) idempotent = false;
      if (phi != FpMat::identity(m.dim[v])) is_one = false;
    }
    if (idempotent && !is_one) return false;
  }
  return true;
}

IsoClasses iso_classes(const Quiver& q, const DimVector& alpha, int p,
                       OracleBudget& budget) {
  IsoClasses out;
  out.gl_size = 1;
  for (int v = 0; v < q.num_vertices(); ++v) out.gl_size *= gl_count(alpha[v], p);
  long long entries = rep_entry_count(q, alpha);
  if (entries == 0) {
    out.reps.push_back(zero_rep(q, alpha, p));
    out.aut_sizes.push_back(out.gl_size);
    return out;
  }
  long long total = ipow(p, (int)entries);
  budget.charge(total);
  const int n = q.num_vertices();
  std::vector<const std::vector<FpMat>*> g(n), ginv(n);
  long long group_size = 1;
  for (int v = 0; v < n; ++v) {
    g[v] = &gl_elements(alpha[v], p);
    ginv[v] = &gl_element_inverses(alpha[v], p);
    group_size *= (long long)g[v]->size();
  }
  std::vector<bool> seen(total, false);
  for (long long idx = 0; idx < total; ++idx) {
    if (seen[idx]) continue;
    budget.charge(group_size);
    FpRep rep = decode_rep(q, alpha, p, idx);
    long long orbit = 0;
    std::vector<size_t> sel(n, 0);
    while (true) {
      FpRep moved = rep;
      for (size_t ar = 0; ar < q.arrows().size(); ++ar) {
        const Arrow& a = q.arrows()[ar];
        moved.mats[ar] =
            fp_mul((*g[a.head])[sel[a.head]],
                   fp_mul(rep.mats[ar], (*ginv[a.tail])[sel[a.tail]], p), p);
      }
      long long j = encode_rep(moved);
      if (!seen[j]) {
        seen[j] = true;
        ++orbit;
      }
      int v = 0;
      while (v < n && ++sel[v] == g[v]->size()) sel[v++] = 0;
      if (v == n) break;
    }
    BigInt aut = out.gl_size / orbit;
    if (aut * orbit != out.gl_size) throw Error("orbit size does not divide the group order");
    out.reps.push_back(decode_rep(q, alpha, p, idx));
    out.aut_sizes.push_back(aut);
  }
  return out;
}

int find_class(const IsoClasses& classes, const FpRep& m, OracleBudget& budget) {
  for (size_t i = 0; i < classes.reps.size(); ++i)
    if (classes.reps[i].dim == m.dim && is_isomorphic(classes.reps[i], m, budget))
      return (int)i;
  throw Error("representation not matched by any class");
}

namespace {

// image of a row vector under the arrow map: w = m * r^T
std::vector<uint8_t> arrow_image(const FpMat& m, const FpMat& basis, int row, int p) {
  std::vector<uint8_t> w(m.rows, 0);
  for (int i = 0; i < m.rows; ++i) {
    int acc = 0;
    for (int j = 0; j < m.cols; ++j) acc += m.at(i, j) * basis.at(row, j);
    w[i] = (uint8_t)(acc % p);
  }
  return w;
}

bool tuple_invariant(const FpRep& m, const std::vector<const FpMat*>& bases) {
  const Quiver& q = *m.quiver;
  for (size_t ar = 0; ar < q.arrows().size(); ++ar) {
    const Arrow& a = q.arrows()[ar];
    for (int r = 0; r < bases[a.tail]->rows; ++r) {
      auto w = arrow_image(m.mats[ar], *bases[a.tail], r, m.p);
      if (!fp_in_rowspace(*bases[a.head], std::move(w), m.p)) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<SubRep> subreps_of_dim(const FpRep& m, const DimVector& gamma,
                                   OracleBudget& budget) {
  const Quiver& q = *m.quiver;
  const int n = q.num_vertices();
  if (!dim_leq(gamma, m.dim)) return {};
  std::vector<const std::vector<FpMat>*> lists(n);
  long long total = 1;
  for (int v = 0; v < n; ++v) {
    lists[v] = &subspaces(m.dim[v], gamma[v], m.p);
    total *= (long long)lists[v]->size();
  }
  budget.charge(total);
  std::vector<SubRep> out;
  std::vector<size_t> sel(n, 0);
  while (true) {
    std::vector<const FpMat*> bases(n);
    for (int v = 0; v < n; ++v) bases[v] = &(*lists[v])[sel[v]];
    if (tuple_invariant(m, bases)) {
      SubRep s;
      s.dim = gamma;
      for (int v = 0; v < n; ++v) s.basis.push_back(*bases[v]);
      out.push_back(std::move(s));
    }
    int v = 0;
    while (v < n && ++sel[v] == lists[v]->size()) sel[v++] = 0;
    if (v == n) break;
  }
  return out;
}

std::vector<SubRep> all_subreps(const FpRep& m, OracleBudget& budget) {
  std::vector<SubRep> out;
  for (const DimVector& gamma : subvectors(m.dim)) {
    auto part = subreps_of_dim(m, gamma, budget);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

bool subrep_contains(const SubRep& inner, const SubRep& outer, int p) {
  for (size_t v = 0; v < inner.basis.size(); ++v) {
    for (int r = 0; r < inner.basis[v].rows; ++r) {
      std::vector<uint8_t> row(inner.basis[v].cols);
      for (int c = 0; c < inner.basis[v].cols; ++c) row[c] = inner.basis[v].at(r, c);
      if (!fp_in_rowspace(outer.basis[v], std::move(row), p)) return false;
    }
  }
  return true;
}

namespace {

// coordinates of w in the RREF basis: read off pivot positions, then check
// the residual vanishes
std::vector<uint8_t> rref_coords(const FpMat& basis, const std::vector<uint8_t>& w, int p) {
  std::vector<uint8_t> coords(basis.rows, 0);
  std::vector<uint8_t> residual = w;
  for (int i = 0; i < basis.rows; ++i) {
    int j = 0;
    while (j < basis.cols && basis.at(i, j) == 0) ++j;
    if (j == basis.cols) continue;
    coords[i] = residual[j];
    int f = residual[j];
    if (f == 0) continue;
    for (int c = 0; c < basis.cols; ++c)
      residual[c] = (uint8_t)((residual[c] + (p - f) * basis.at(i, c)) % p);
  }
  for (uint8_t x : residual)
    if (x != 0) throw Error("vector is not in the subrepresentation");
  return coords;
}

}  // namespace

FpRep restrict_to(const FpRep& m, const SubRep& u) {
  FpRep r = zero_rep(*m.quiver, u.dim, m.p);
  const Quiver& q = *m.quiver;
  for (size_t ar = 0; ar < q.arrows().size(); ++ar) {
    const Arrow& a = q.arrows()[ar];
    for (int c = 0; c < u.dim[a.tail]; ++c) {
      auto w = arrow_image(m.mats[ar], u.basis[a.tail], c, m.p);
      auto coords = rref_coords(u.basis[a.head], w, m.p);
      for (int i = 0; i < u.dim[a.head]; ++i) r.mats[ar].at(i, c) = coords[i];
    }
  }
  return r;
}

FpRep quotient_by(const FpRep& m, const SubRep& u) {
  const Quiver& q = *m.quiver;
  const int p = m.p;
  const int n = q.num_vertices();
  // per-vertex basis: subrep rows first, then standard vectors off the pivots
  std::vector<FpMat> basis_t(n);   // B_v^T, basis vectors as columns
  std::vector<FpMat> to_new(n);    // coordinate map x -> (B_v^T)^(-1) x
  DimVector qdim(n);
  for (int v = 0; v < n; ++v) {
    int nv = m.dim[v], k = u.dim[v];
    qdim[v] = nv - k;
    FpMat b = FpMat::zero(nv, nv);
    std::vector<bool> is_pivot(nv, false);
    for (int i = 0; i < k; ++i) {
      int j = 0;
      while (u.basis[v].at(i, j) == 0) ++j;
      is_pivot[j] = true;
      for (int c = 0; c < nv; ++c) b.at(i, c) = u.basis[v].at(i, c);
    }
    int row = k;
    for (int j = 0; j < nv; ++j)
      if (!is_pivot[j]) b.at(row++, j) = 1;
    basis_t[v] = FpMat::zero(nv, nv);
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j) basis_t[v].at(i, j) = b.at(j, i);
    to_new[v] = fp_inverse(basis_t[v], p);
  }
  FpRep out = zero_rep(q, qdim, p);
  for (size_t ar = 0; ar < q.arrows().size(); ++ar) {
    const Arrow& a = q.arrows()[ar];
    int kt = u.dim[a.tail], kh = u.dim[a.head];
    // operator in new coordinates: (B_h^T)^(-1) M B_t^T
    FpMat nm = fp_mul(to_new[a.head], fp_mul(m.mats[ar], basis_t[a.tail], p), p);
    for (int r = kh; r < m.dim[a.head]; ++r)
      for (int c = 0; c < kt; ++c)
        if (nm.at(r, c) != 0) throw Error("subspace is not invariant");
    for (int r = kh; r < m.dim[a.head]; ++r)
      for (int c = kt; c < m.dim[a.tail]; ++c)
        out.mats[ar].at(r - kh, c - kt) = nm.at(r, c);
  }
  return out;
}

BigInt grassmannian_count(const FpRep& m, const DimVector& gamma, OracleBudget& budget) {
  return BigInt(subreps_of_dim(m, gamma, budget).size());
}

BigInt flag_count(const FpRep& m, const std::vector<DimVector>& parts,
                  OracleBudget& budget) {
  DimVector acc(m.dim.size(), 0);
  std::vector<DimVector> prefixes;
  for (const auto& part : parts) {
    if (!dim_nonneg(part)) throw Error("flag part is negative");
    acc = dim_add(acc, part);
    prefixes.push_back(acc);
  }
  if (acc != m.dim) throw Error("flag parts do not sum to the dimension vector");
  // count chains over the nested prefix levels (the last level is m itself)
  std::vector<std::vector<SubRep>> levels;
  for (size_t i = 0; i + 1 < prefixes.size(); ++i)
    levels.push_back(subreps_of_dim(m, prefixes[i], budget));
  std::vector<BigInt> ways;
  for (size_t lvl = 0; lvl < levels.size(); ++lvl) {
    std::vector<BigInt> next(levels[lvl].size(), 0);
    for (size_t j = 0; j < levels[lvl].size(); ++j) {
      if (lvl == 0) {
        next[j] = 1;
        continue;
      }
      for (size_t i = 0; i < levels[lvl - 1].size(); ++i) {
        budget.charge(1);
        if (ways[i] != 0 && subrep_contains(levels[lvl - 1][i], levels[lvl][j], m.p))
          next[j] += ways[i];
      }
    }
    ways = std::move(next);
  }
  if (levels.empty()) return 1;
  BigInt total = 0;
  for (const BigInt& w : ways) total += w;
  return total;
}

namespace {

// subreps whose slope beats (or ties) the ambient slope decide stability
bool has_subrep_with_slope(const FpRep& m, const Stability& sigma, bool strict,
                           OracleBudget& budget) {
  Slope mu = slope_of(sigma, m.dim);
  for (const DimVector& gamma : subvectors(m.dim)) {
    if (dim_is_zero(gamma) || gamma == m.dim) continue;
    Slope s = slope_of(sigma, gamma);
    bool violates = strict ? (s > mu) : (s >= mu);
    if (!violates) continue;
    if (!subreps_of_dim(m, gamma, budget).empty()) return true;
  }
  return false;
}

}  // namespace

bool is_semistable(const FpRep& m, const Stability& sigma, OracleBudget& budget) {
  return !has_subrep_with_slope(m, sigma, /*strict=*/true, budget);
}

bool is_stable(const FpRep& m, const Stability& sigma, OracleBudget& budget) {
  if (dim_is_zero(m.dim)) return false;
  return !has_subrep_with_slope(m, sigma, /*strict=*/false, budget);
}

bool is_absolutely_stable(const FpRep& m, const Stability& sigma, OracleBudget& budget) {
  return is_stable(m, sigma, budget) && hom_dim(m, m) == 1;
}

namespace {

BigRat class_mass(const Quiver& q, const std::optional<Stability>& sigma,
                  const DimVector& alpha, int p, OracleBudget& budget,
                  const std::function<BigInt(const FpRep&)>& weight) {
  IsoClasses classes = iso_classes(q, alpha, p, budget);
  BigRat total = 0;
  for (size_t i = 0; i < classes.reps.size(); ++i) {
    if (sigma && !is_semistable(classes.reps[i], *sigma, budget)) continue;
    BigInt w = weight(classes.reps[i]);
    if (w != 0) total += BigRat(w, classes.aut_sizes[i]);
  }
  return total;
}

}  // namespace

BigRat free_mass(const Quiver& q, const DimVector& alpha, int p, OracleBudget& budget) {
  return class_mass(q, std::nullopt, alpha, p, budget,
                    [](const FpRep&) { return BigInt(1); });
}

BigRat semistable_mass(const Quiver& q, const Stability& sigma, const DimVector& alpha,
                       int p, OracleBudget& budget) {
  return class_mass(q, sigma, alpha, p, budget,
                    [](const FpRep&) { return BigInt(1); });
}

BigRat grassmannian_mass(const Quiver& q, const std::optional<Stability>& sigma,
                         const DimVector& alpha, const DimVector& gamma, int p,
                         OracleBudget& budget) {
  return class_mass(q, sigma, alpha, p, budget, [&](const FpRep& m) {
    return grassmannian_count(m, gamma, budget);
  });
}

BigRat flag_mass(const Quiver& q, const std::optional<Stability>& sigma,
                 const DimVector& alpha, const std::vector<DimVector>& parts,
                 int p, OracleBudget& budget) {
  return class_mass(q, sigma, alpha, p, budget,
                    [&](const FpRep& m) { return flag_count(m, parts, budget); });
}

BigInt stable_class_count(const Quiver& q, const Stability& sigma, const DimVector& alpha,
                          int p, bool absolutely, OracleBudget& budget) {
  IsoClasses classes = iso_classes(q, alpha, p, budget);
  BigInt count = 0;
  for (const FpRep& m : classes.reps) {
    bool ok = absolutely ? is_absolutely_stable(m, sigma, budget)
                         : is_stable(m, sigma, budget);
    if (ok) ++count;
  }
  return count;
}

BigInt hall_number(const FpRep& m, const FpRep& a, const FpRep& b,
                   OracleBudget& budget) {
  if (dim_add(a.dim, b.dim) != m.dim) return 0;
  BigInt count = 0;
  for (const SubRep& u : subreps_of_dim(m, b.dim, budget)) {
    if (!is_isomorphic(restrict_to(m, u), b, budget)) continue;
    if (is_isomorphic(quotient_by(m, u), a, budget)) ++count;
  }
  return count;
}

std::map<int, BigInt> ext_middle_distribution(const FpRep& a, const FpRep& b,
                                              const IsoClasses& classes,
                                              OracleBudget& budget) {
  HomMatrix h = build_hom_matrix(a, b);
  const int p = a.p;
  const Quiver& q = *a.quiver;
  // row space of the transposed map is the image; its complement in the
  // cocycle space is spanned by the standard vectors off the pivots
  FpMat dt = FpMat::zero(h.phi_dim, h.z_dim);
  for (int i = 0; i < h.z_dim; ++i)
    for (int j = 0; j < h.phi_dim; ++j) dt.at(j, i) = h.d.at(i, j);
  int rank = fp_rref(dt, p);
  std::vector<bool> is_pivot(h.z_dim, false);
  for (int i = 0; i < rank; ++i) {
    int j = 0;
    while (dt.at(i, j) == 0) ++j;
    is_pivot[j] = true;
  }
  std::vector<int> free_pos;
  for (int j = 0; j < h.z_dim; ++j)
    if (!is_pivot[j]) free_pos.push_back(j);
  long long total = ipow(p, (int)free_pos.size());
  budget.charge(total);
  std::map<int, BigInt> dist;
  std::map<long long, int> memo;
  for (long long idx = 0; idx < total; ++idx) {
    std::vector<uint8_t> z(h.z_dim, 0);
    long long x = idx;
    for (int j : free_pos) {
      z[j] = (uint8_t)(x % p);
      x /= p;
    }
    // middle term: blockwise [[B_a, z_a], [0, A_a]]
    FpRep mid = zero_rep(q, dim_add(b.dim, a.dim), p);
    for (size_t ar = 0; ar < q.arrows().size(); ++ar) {
      const Arrow& arrow = q.arrows()[ar];
      const FpMat& bm = b.mats[ar];
      const FpMat& am = a.mats[ar];
      for (int i = 0; i < bm.rows; ++i)
        for (int j = 0; j < bm.cols; ++j) mid.mats[ar].at(i, j) = bm.at(i, j);
      for (int i = 0; i < am.rows; ++i)
        for (int j = 0; j < am.cols; ++j)
          mid.mats[ar].at(bm.rows + i, bm.cols + j) = am.at(i, j);
      int at = a.dim[arrow.tail];
      for (int r = 0; r < b.dim[arrow.head]; ++r)
        for (int c = 0; c < at; ++c)
          mid.mats[ar].at(r, bm.cols + c) = z[h.row_base[ar] + r * at + c];
    }
    long long code = encode_rep(mid);
    auto it = memo.find(code);
    int cls;
    if (it != memo.end()) {
      cls = it->second;
    } else {
      cls = find_class(classes, mid, budget);
      memo.emplace(code, cls);
    }
    dist[cls] += 1;
  }
  return dist;
}

BigInt filtration_alt_sum(const FpRep& m,
                          const std::function<bool(const FpRep&)>& admissible,
                          OracleBudget& budget) {
  std::vector<SubRep> subs = all_subreps(m, budget);
  std::vector<size_t> order(subs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    return dim_total(subs[x].dim) > dim_total(subs[y].dim);
  });
  std::vector<BigInt> h(subs.size(), 0);
  std::vector<int> adm(subs.size(), -1);
  BigInt at_zero = 0;
  for (size_t oi = 0; oi < order.size(); ++oi) {
    size_t i = order[oi];
    if (subs[i].dim == m.dim) {
      h[i] = 1;
      continue;
    }
    BigInt acc = 0;
    for (size_t j = 0; j < subs.size(); ++j) {
      if (dim_total(subs[j].dim) <= dim_total(subs[i].dim)) continue;
      if (h[j] == 0) continue;
      if (!dim_leq(subs[i].dim, subs[j].dim)) continue;
      budget.charge(1);
      if (!subrep_contains(subs[i], subs[j], m.p)) continue;
      if (subs[j].dim != m.dim) {
        if (adm[j] < 0) adm[j] = admissible(restrict_to(m, subs[j])) ? 1 : 0;
        if (adm[j] == 0) continue;
      }
      acc += h[j];
    }
    h[i] = -acc;
    if (dim_is_zero(subs[i].dim)) at_zero = h[i];
  }
  if (dim_is_zero(m.dim)) return 1;
  return at_zero;
}

}  // namespace qhall
