#include "qhall/quiver.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace qhall {

Quiver::Quiver(int vertices, std::vector<Arrow> arrows)
    : n_(vertices), arrows_(std::move(arrows)) {
  if (n_ <= 0) throw Error("quiver needs at least one vertex");
  for (auto& a : arrows_)
    if (a.tail < 0 || a.tail >= n_ || a.head < 0 || a.head >= n_)
      throw Error("arrow endpoint out of range");
  euler_.assign(n_, std::vector<int>(n_, 0));
  for (int v = 0; v < n_; ++v) euler_[v][v] = 1;
  for (auto& a : arrows_) euler_[a.tail][a.head] -= 1;
  names_.resize(n_);
  for (int v = 0; v < n_; ++v) names_[v] = std::to_string(v + 1);
}

int Quiver::arrow_count(int u, int v) const {
  int c = 0;
  for (auto& a : arrows_)
    if (a.tail == u && a.head == v) ++c;
  return c;
}

bool Quiver::is_acyclic() const {
  // Kahn topological sort on the multigraph
  std::vector<int> indeg(n_, 0);
  for (auto& a : arrows_) ++indeg[a.head];
  std::vector<int> stack;
  for (int v = 0; v < n_; ++v)
    if (indeg[v] == 0) stack.push_back(v);
  int seen = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++seen;
    for (auto& a : arrows_)
      if (a.tail == v && --indeg[a.head] == 0) stack.push_back(a.head);
  }
  return seen == n_;
}

long long Quiver::euler_form(const DimVector& a, const DimVector& b) const {
  if (static_cast<int>(a.size()) != n_ || static_cast<int>(b.size()) != n_)
    throw Error("dimension vector has wrong length");
  long long r = 0;
  for (int v = 0; v < n_; ++v) r += static_cast<long long>(a[v]) * b[v];
  for (auto& ar : arrows_) r -= static_cast<long long>(a[ar.tail]) * b[ar.head];
  return r;
}

long long Quiver::rep_dim(const DimVector& a) const {
  long long r = 0;
  for (auto& ar : arrows_) r += static_cast<long long>(a[ar.tail]) * a[ar.head];
  return r;
}

void Quiver::set_names(std::vector<std::string> names) {
  if (static_cast<int>(names.size()) != n_)
    throw Error("vertex name list has wrong length");
  names_ = std::move(names);
}

std::string Quiver::canonical_string() const {
  std::ostringstream out;
  out << "V";
  for (auto& nm : names_) out << ":" << nm;
  out << ";A";
  for (auto& a : arrows_) out << ":" << a.tail << ">" << a.head;
  return out.str();
}

Slope::Slope(long long num, long long den) : num_(num), den_(den) {
  if (den_ == 0) throw Error("slope with zero denominator");
  if (den_ < 0) { num_ = -num_; den_ = -den_; }
  long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) { num_ /= g; den_ /= g; }
}

std::string Slope::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

DimVector dim_add(const DimVector& a, const DimVector& b) {
  DimVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

DimVector dim_sub(const DimVector& a, const DimVector& b) {
  DimVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

bool dim_is_zero(const DimVector& a) {
  return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; });
}

bool dim_leq(const DimVector& a, const DimVector& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

bool dim_nonneg(const DimVector& a) {
  return std::all_of(a.begin(), a.end(), [](int x) { return x >= 0; });
}

long long dim_total(const DimVector& a) {
  return std::accumulate(a.begin(), a.end(), 0LL);
}

long long weight_pair(const Weight& w, const DimVector& a) {
  if (w.size() != a.size()) throw Error("weight/dimension length mismatch");
  long long r = 0;
  for (size_t i = 0; i < a.size(); ++i) r += static_cast<long long>(w[i]) * a[i];
  return r;
}

Slope slope_of(const Stability& st, const DimVector& a) {
  if (dim_is_zero(a)) throw Error("slope of the zero dimension vector");
  return Slope(weight_pair(st.sigma, a), weight_pair(st.theta, a));
}

void validate_stability(const Quiver& q, const Stability& st) {
  if (static_cast<int>(st.sigma.size()) != q.num_vertices() ||
      static_cast<int>(st.theta.size()) != q.num_vertices())
    throw Error("stability weights must match the vertex count");
  for (int t : st.theta)
    if (t <= 0) throw Error("theta must be strictly positive");
}

bool coprime_check(const Quiver& q, const Stability& st, const DimVector& alpha) {
  validate_stability(q, st);
  if (dim_is_zero(alpha)) throw Error("coprime_check needs a nonzero vector");
  Slope mu = slope_of(st, alpha);
  for (auto& g : subvectors(alpha)) {
    if (dim_is_zero(g) || g == alpha) continue;
    if (slope_of(st, g) == mu) return false;
  }
  return true;
}

std::vector<DimVector> subvectors(const DimVector& alpha) {
  std::vector<DimVector> out;
  DimVector g(alpha.size(), 0);
  while (true) {
    out.push_back(g);
    size_t i = 0;
    while (i < alpha.size()) {
      if (g[i] < alpha[i]) { ++g[i]; break; }
      g[i] = 0;
      ++i;
    }
    if (i == alpha.size()) break;
  }
  return out;
}

namespace {

std::vector<std::string> tokenize(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

struct ArrowSpec {
  std::string tail, head;
  int mult = 1;
};

// "1->2 *4" within a comma-separated list
ArrowSpec parse_arrow_spec(const std::string& item) {
  auto pos = item.find("->");
  if (pos == std::string::npos) throw Error("arrow must contain '->': " + item);
  ArrowSpec spec;
  auto star = item.find('*', pos);
  std::string tail = item.substr(0, pos);
  std::string head = item.substr(pos + 2, star == std::string::npos
                                              ? std::string::npos
                                              : star - pos - 2);
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return std::string();
    return s.substr(b, e - b + 1);
  };
  spec.tail = trim(tail);
  spec.head = trim(head);
  if (spec.tail.empty() || spec.head.empty())
    throw Error("arrow endpoint missing: " + item);
  if (star != std::string::npos) {
    std::string m = trim(item.substr(star + 1));
    spec.mult = std::stoi(m);
    if (spec.mult <= 0) throw Error("arrow multiplicity must be positive");
  }
  return spec;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (auto& t : tokenize(s)) out.push_back(std::stoi(t));
  return out;
}

}  // namespace

QuiverInput parse_quiver_text(const std::string& text) {
  std::vector<std::string> names;
  std::vector<ArrowSpec> arrow_specs;
  std::vector<int> sigma, theta;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto colon = line.find(':');
    if (colon == std::string::npos) {
      if (!tokenize(line).empty()) throw Error("unrecognized line: " + line);
      continue;
    }
    std::string key = line.substr(0, colon);
    std::string val = line.substr(colon + 1);
    auto keytoks = tokenize(key);
    if (keytoks.size() != 1) throw Error("bad key: " + key);
    key = keytoks[0];
    if (key == "vertices") {
      for (auto& t : tokenize(val)) names.push_back(t);
    } else if (key == "arrows") {
      std::istringstream items(val);
      std::string item;
      while (std::getline(items, item, ','))
        if (!tokenize(item).empty()) arrow_specs.push_back(parse_arrow_spec(item));
    } else if (key == "sigma") {
      sigma = parse_int_list(val);
    } else if (key == "theta") {
      theta = parse_int_list(val);
    } else {
      throw Error("unknown key in quiver file: " + key);
    }
  }
  if (names.empty()) throw Error("quiver file has no vertices");
  std::map<std::string, int> index;
  for (size_t i = 0; i < names.size(); ++i) {
    if (index.count(names[i])) throw Error("duplicate vertex name: " + names[i]);
    index[names[i]] = static_cast<int>(i);
  }
  std::vector<Arrow> arrows;
  for (auto& s : arrow_specs) {
    if (!index.count(s.tail)) throw Error("unknown vertex: " + s.tail);
    if (!index.count(s.head)) throw Error("unknown vertex: " + s.head);
    for (int i = 0; i < s.mult; ++i)
      arrows.push_back({index[s.tail], index[s.head]});
  }
  QuiverInput out;
  out.quiver = Quiver(static_cast<int>(names.size()), arrows);
  out.quiver.set_names(names);
  int n = out.quiver.num_vertices();
  if (!sigma.empty()) {
    if (static_cast<int>(sigma.size()) != n)
      throw Error("sigma has wrong length");
    out.has_sigma = true;
    out.stability.sigma = sigma;
  }
  out.stability.theta = theta.empty() ? Weight(n, 1) : Weight(theta);
  if (static_cast<int>(out.stability.theta.size()) != n)
    throw Error("theta has wrong length");
  for (int t : out.stability.theta)
    if (t <= 0) throw Error("theta must be strictly positive");
  return out;
}

QuiverInput parse_quiver_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<std::string> names;
  for (auto& v : j.at("vertices")) {
    if (v.is_string()) names.push_back(v.get<std::string>());
    else names.push_back(std::to_string(v.get<long long>()));
  }
  std::map<std::string, int> index;
  for (size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
  auto resolve = [&](const nlohmann::json& v) -> int {
    std::string s = v.is_string() ? v.get<std::string>()
                                  : std::to_string(v.get<long long>());
    if (!index.count(s)) throw Error("unknown vertex in arrow: " + s);
    return index[s];
  };
  std::vector<Arrow> arrows;
  if (j.contains("arrows"))
    for (auto& a : j["arrows"]) {
      int mult = a.value("mult", 1);
      for (int i = 0; i < mult; ++i)
        arrows.push_back({resolve(a.at("tail")), resolve(a.at("head"))});
    }
  QuiverInput out;
  out.quiver = Quiver(static_cast<int>(names.size()), arrows);
  out.quiver.set_names(names);
  int n = out.quiver.num_vertices();
  if (j.contains("sigma")) {
    out.has_sigma = true;
    out.stability.sigma = j["sigma"].get<std::vector<int>>();
    if (static_cast<int>(out.stability.sigma.size()) != n)
      throw Error("sigma has wrong length");
  }
  if (j.contains("theta")) {
    out.stability.theta = j["theta"].get<std::vector<int>>();
    if (static_cast<int>(out.stability.theta.size()) != n)
      throw Error("theta has wrong length");
  } else {
    out.stability.theta = Weight(n, 1);
  }
  for (int t : out.stability.theta)
    if (t <= 0) throw Error("theta must be strictly positive");
  return out;
}

QuiverInput parse_quiver_any(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' ? parse_quiver_json(text) : parse_quiver_text(text);
  }
  throw Error("empty quiver description");
}

std::string quiver_to_json(const QuiverInput& in) {
  nlohmann::json j;
  j["vertices"] = in.quiver.names();
  nlohmann::json arrows = nlohmann::json::array();
  // compress parallel arrows back into multiplicities (input order preserved)
  std::vector<Arrow> seen;
  for (size_t i = 0; i < in.quiver.arrows().size(); ++i) {
    const Arrow& a = in.quiver.arrows()[i];
    bool merged = false;
    for (auto& entry : arrows)
      if (entry["tail"] == in.quiver.names()[a.tail] &&
          entry["head"] == in.quiver.names()[a.head]) {
        entry["mult"] = entry["mult"].get<int>() + 1;
        merged = true;
        break;
      }
    if (!merged)
      arrows.push_back({{"tail", in.quiver.names()[a.tail]},
                        {"head", in.quiver.names()[a.head]},
                        {"mult", 1}});
  }
  j["arrows"] = arrows;
  if (in.has_sigma) j["sigma"] = in.stability.sigma;
  j["theta"] = in.stability.theta;
  return j.dump(2);
}

Quiver kronecker_quiver(int m) {
  if (m < 1) throw Error("Kronecker quiver needs at least one arrow");
  std::vector<Arrow> arrows(m, Arrow{0, 1});
  return Quiver(2, arrows);
}

Quiver linear_quiver(int n) {
  std::vector<Arrow> arrows;
  for (int i = 0; i + 1 < n; ++i) arrows.push_back({i, i + 1});
  return Quiver(n, arrows);
}

namespace {

// standard edge listings (0-based vertex indices)
std::vector<std::pair<int, int>> dynkin_edges(char type, int rank) {
  std::vector<std::pair<int, int>> edges;
  if (type == 'A') {
    if (rank < 1) throw Error("A_n needs rank >= 1");
    for (int i = 0; i + 1 < rank; ++i) edges.push_back({i, i + 1});
  } else if (type == 'D') {
    if (rank < 4) throw Error("D_n needs rank >= 4");
    edges.push_back({0, 2});
    edges.push_back({1, 2});
    for (int i = 2; i + 1 < rank; ++i) edges.push_back({i, i + 1});
  } else if (type == 'E') {
    if (rank < 6 || rank > 8) throw Error("E_n needs rank 6, 7, or 8");
    edges.push_back({0, 2});
    edges.push_back({1, 3});
    edges.push_back({2, 3});
    for (int i = 3; i + 1 < rank; ++i) edges.push_back({i, i + 1});
  } else {
    throw Error("Dynkin type must be A, D, or E");
  }
  return edges;
}

}  // namespace

Quiver dynkin_quiver(char type, int rank, const std::vector<bool>& orientation) {
  auto edges = dynkin_edges(type, rank);
  std::vector<bool> orient = orientation;
  if (orient.empty()) orient.assign(edges.size(), true);
  if (orient.size() != edges.size())
    throw Error("orientation must give one bit per edge");
  std::vector<Arrow> arrows;
  for (size_t i = 0; i < edges.size(); ++i) {
    auto [a, b] = edges[i];
    if (orient[i]) arrows.push_back({a, b});
    else arrows.push_back({b, a});
  }
  return Quiver(rank, arrows);
}

std::vector<DimVector> positive_roots(const Quiver& q) {
  int n = q.num_vertices();
  // Tits form via the symmetrized Euler form; closure under adding simples
  auto tits = [&](const DimVector& a) { return q.euler_form(a, a); };
  std::vector<DimVector> roots;
  std::vector<DimVector> frontier;
  for (int v = 0; v < n; ++v) {
    DimVector e(n, 0);
    e[v] = 1;
    roots.push_back(e);
    frontier.push_back(e);
  }
  auto known = [&](const DimVector& a) {
    return std::find(roots.begin(), roots.end(), a) != roots.end();
  };
  while (!frontier.empty()) {
    std::vector<DimVector> next;
    for (auto& r : frontier)
      for (int v = 0; v < n; ++v) {
        DimVector cand = r;
        ++cand[v];
        if (tits(cand) == 1 && !known(cand)) {
          roots.push_back(cand);
          next.push_back(cand);
        }
      }
    frontier = std::move(next);
  }
  std::sort(roots.begin(), roots.end(), [](const DimVector& a, const DimVector& b) {
    long long ta = dim_total(a), tb = dim_total(b);
    if (ta != tb) return ta < tb;
    return a < b;
  });
  return roots;
}

}  // namespace qhall
