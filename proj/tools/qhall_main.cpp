/*
 * Command-line front end.  One subcommand per engine entry point; exact
 * arithmetic everywhere, deterministic output in text or JSON.
 *
 * Exit codes: 0 success, 1 verification failure, 2 usage or malformed
 * input, 3 oracle budget exhausted.
 */

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qhall/cluster.hpp"
#include "qhall/count.hpp"
#include "qhall/dilog.hpp"
#include "qhall/exactq.hpp"
#include "qhall/lambdaring.hpp"
#include "qhall/oracle.hpp"
#include "qhall/quiver.hpp"
#include "qhall/series.hpp"

using nlohmann::json;
using namespace qhall;

namespace {

std::string dim_str(const DimVector& a) {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) out << ",";
    out << a[i];
  }
  out << ")";
  return out.str();
}

QuiverInput load_quiver(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open quiver file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_quiver_any(text.str());
}

// --sigma / --theta override the quiver file; theta defaults to all ones
Stability resolve_stability(const Quiver& q, const QuiverInput& in,
                            const std::vector<int>& sigma,
                            const std::vector<int>& theta) {
  Stability st;
  if (!sigma.empty()) st.sigma = sigma;
  else if (in.has_sigma) st.sigma = in.stability.sigma;
  else throw Error("no sigma weight: pass --sigma or add it to the quiver file");
  if (!theta.empty()) st.theta = theta;
  else if (in.has_sigma && !in.stability.theta.empty()) st.theta = in.stability.theta;
  else st.theta = Weight(q.num_vertices(), 1);
  validate_stability(q, st);
  return st;
}

DimVector checked_dim(const Quiver& q, const std::vector<int>& v,
                      const std::string& name) {
  if ((int)v.size() != q.num_vertices())
    throw Error(name + " must have one entry per vertex (" +
                std::to_string(q.num_vertices()) + ")");
  return v;
}

void print_count(const std::string& command, const json& inputs,
                 const CountResult& res, const std::string& format,
                 const std::vector<std::pair<std::string, std::string>>& extra) {
  if (format == "json") {
    json out = inputs;
    out["command"] = command;
    out["result"] = json::parse(res.to_json());
    for (const auto& [k, v] : extra) out[k] = v;
    std::cout << out.dump() << "\n";
    return;
  }
  std::cout << "raw: " << res.raw.str() << "\n";
  std::cout << "normalized: "
            << (res.normalized ? res.normalized->str() : "not a polynomial")
            << "\n";
  std::cout << "coprime: " << (res.coprime ? "yes" : "no")
            << "  nonneg: " << (res.nonneg ? "yes" : "no") << "\n";
  for (const auto& [k, v] : extra) std::cout << k << ": " << v << "\n";
}

int run_moduli(const std::string& quiver_path, const std::vector<int>& alpha,
               const std::vector<int>& sigma, const std::vector<int>& theta,
               const std::string& format) {
  QuiverInput in = load_quiver(quiver_path);
  Stability st = resolve_stability(in.quiver, in, sigma, theta);
  DimVector a = checked_dim(in.quiver, alpha, "--alpha");
  CountCache cache = CountCache::from_env();
  CountResult res = moduli_count(in.quiver, st, a, &cache);
  print_count("moduli", json{{"alpha", a}}, res, format, {});
  return 0;
}

int run_grass(const std::string& quiver_path, const std::vector<int>& alpha,
              const std::vector<int>& gamma, const std::vector<int>& sigma,
              const std::vector<int>& theta, bool cross_check,
              const std::string& format) {
  QuiverInput in = load_quiver(quiver_path);
  Stability st = resolve_stability(in.quiver, in, sigma, theta);
  DimVector a = checked_dim(in.quiver, alpha, "--alpha");
  DimVector g = checked_dim(in.quiver, gamma, "--gamma");
  CountCache cache = CountCache::from_env();
  CountResult res = grassmannian_moduli_count(in.quiver, st, a, g, &cache);
  std::vector<std::pair<std::string, std::string>> extra;
  bool matched = true;
  if (cross_check) {
    QRat other = transfer_matrix_grassmannian(in.quiver, st, a, g);
    matched = other == res.raw;
    extra.push_back({"transfer_matrix", matched ? "match" : "mismatch"});
  }
  print_count("grass", json{{"alpha", a}, {"gamma", g}}, res, format, extra);
  return matched ? 0 : 1;
}

int run_flag(const std::string& quiver_path,
             const std::vector<std::vector<int>>& part_flags,
             const std::vector<int>& sigma, const std::vector<int>& theta,
             const std::string& format) {
  QuiverInput in = load_quiver(quiver_path);
  Stability st = resolve_stability(in.quiver, in, sigma, theta);
  std::vector<DimVector> parts;
  for (const auto& p : part_flags)
    parts.push_back(checked_dim(in.quiver, p, "--part"));
  if (parts.empty()) throw Error("flag needs at least one --part");
  CountCache cache = CountCache::from_env();
  CountResult res = flag_moduli_count(in.quiver, st, parts, &cache);
  json jparts = json::array();
  for (const auto& p : parts) jparts.push_back(p);
  print_count("flag", json{{"parts", jparts}}, res, format, {});
  return 0;
}

int run_cluster_var(const std::string& quiver_path,
                    const std::vector<int>& alpha,
                    const std::vector<int>& verify_with,
                    const std::vector<int>& sigma,
                    const std::vector<int>& theta, const std::string& format) {
  QuiverInput in = load_quiver(quiver_path);
  Stability st = resolve_stability(in.quiver, in, sigma, theta);
  DimVector a = checked_dim(in.quiver, alpha, "--alpha");
  PrincipalFrame frame(in.quiver);
  CountCache cache = CountCache::from_env();
  std::map<DimVector, VPoly> table =
      rigid_grassmannian_table(frame.quiver(), st, a, &cache);
  ClusterElement x = cluster_variable(frame, a, table);

  bool checked = false, ok = true;
  if (!verify_with.empty()) {
    DimVector b = checked_dim(in.quiver, verify_with, "--verify-with");
    OracleBudget budget = OracleBudget::from_env();
    auto unique_semistable = [&](const DimVector& d) {
      IsoClasses classes = iso_classes(frame.quiver(), d, 2, budget);
      std::optional<FpRep> found;
      for (const auto& m : classes.reps) {
        if (!is_semistable(m, st, budget)) continue;
        if (found)
          throw Error("verification needs a unique semistable class of " +
                      dim_str(d));
        found = m;
      }
      if (!found)
        throw Error("no semistable class of dimension " + dim_str(d));
      return *found;
    };
    FpRep u = unique_semistable(a);
    FpRep v = unique_semistable(b);
    ok = verify_cluster_multiplication(frame, u, v, budget);
    checked = true;
  }

  if (format == "json") {
    json out{{"command", "cluster-var"}, {"alpha", a}};
    out["variable"] = json::parse(x.to_json());
    if (checked) out["multiplication_check"] = ok ? "pass" : "fail";
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "X" << dim_str(a) << " = " << x.str() << "\n";
    if (checked)
      std::cout << "multiplication check: " << (ok ? "pass" : "fail") << "\n";
  }
  return ok ? 0 : 1;
}

int run_series(const std::string& quiver_path, const std::vector<int>& probe_vec,
               long long trunc, const std::vector<int>& sigma,
               const std::vector<int>& theta, const std::string& format) {
  QuiverInput in = load_quiver(quiver_path);
  Stability st = resolve_stability(in.quiver, in, sigma, theta);
  DimVector probe = checked_dim(in.quiver, probe_vec, "--slope-of");
  if (dim_is_zero(probe)) throw Error("--slope-of must be nonzero");
  Slope mu0 = slope_of(st, probe);
  ModuliSeries ms = moduli_series(in.quiver, st, mu0, trunc);

  std::map<SeriesKey, bool> keys;
  for (const auto& [k, c] : ms.semistable.terms()) keys[k] = true;
  for (const auto& [k, c] : ms.absolute.terms()) keys[k] = true;
  for (const auto& [k, c] : ms.relative.terms()) keys[k] = true;
  keys.erase(SeriesKey(in.quiver.num_vertices(), 0));

  if (format == "json") {
    json entries = json::array();
    for (const auto& [k, unused] : keys)
      entries.push_back(json{{"alpha", k},
                             {"rss", ms.semistable.coeff(k).str()},
                             {"a", ms.absolute.coeff(k).str()},
                             {"m", ms.relative.coeff(k).str()}});
    json out{{"command", "series"},
             {"mu", mu0.str()},
             {"truncation", trunc},
             {"entries", entries}};
    std::cout << out.dump() << "\n";
    return 0;
  }

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"alpha", "r^ss", "a", "m"});
  for (const auto& [k, unused] : keys)
    rows.push_back({dim_str(k), ms.semistable.coeff(k).str(),
                    ms.absolute.coeff(k).str(), ms.relative.coeff(k).str()});
  std::vector<size_t> width(4, 0);
  for (const auto& r : rows)
    for (int c = 0; c < 4; ++c) width[c] = std::max(width[c], r[c].size());
  std::cout << "slope: " << mu0.str() << "  truncation: " << trunc << "\n";
  for (const auto& r : rows) {
    for (int c = 0; c < 4; ++c) {
      std::cout << r[c];
      if (c < 3) std::cout << std::string(width[c] - r[c].size() + 2, ' ');
    }
    std::cout << "\n";
  }
  return 0;
}

int run_dilog(const std::string& type, int rank,
              const std::vector<int>& orientation, long long trunc,
              const std::string& format) {
  if (type.size() != 1) throw Error("--type must be a single letter A, D, or E");
  std::vector<bool> bits;
  for (int b : orientation) {
    if (b != 0 && b != 1) throw Error("--orientation entries must be 0 or 1");
    bits.push_back(b == 1);
  }
  DilogReport report = verify_dynkin_identity(type[0], rank, bits, trunc);
  if (format == "json") {
    json out{{"command", "dilog"},
             {"ok", report.ok},
             {"simples_match", report.simples_match},
             {"indec_match", report.indec_match},
             {"first_diff", report.first_diff},
             {"truncation", trunc}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "simple-order product == character: "
              << (report.simples_match ? "yes" : "no") << "\n";
    std::cout << "indecomposable product == character: "
              << (report.indec_match ? "yes" : "no") << "\n";
    if (report.ok) {
      std::cout << "identity verified to degree " << trunc << "\n";
    } else {
      std::cout << "first difference: " << report.first_diff << "\n";
    }
  }
  return report.ok ? 0 : 1;
}

// all nonzero alpha with |alpha| <= bound
std::vector<DimVector> dims_up_to(int vertices, int bound) {
  std::vector<DimVector> out;
  DimVector cur(vertices, 0);
  std::function<void(int, int)> rec = [&](int v, int left) {
    if (v == vertices) {
      if (!dim_is_zero(cur)) out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[v] = k;
      rec(v + 1, left - k);
    }
    cur[v] = 0;
  };
  rec(0, bound);
  return out;
}

int run_verify(const std::string& quiver_path, const std::vector<int>& qs,
               int max_dim, int flag_steps, const std::vector<int>& sigma,
               const std::vector<int>& theta, const std::string& format) {
  QuiverInput in = load_quiver(quiver_path);
  Stability st = resolve_stability(in.quiver, in, sigma, theta);
  if (qs.empty()) throw Error("verify needs at least one field size --q");
  OracleBudget budget = OracleBudget::from_env();
  CountCache cache = CountCache::from_env();

  long long checks = 0;
  std::vector<std::string> failures;
  auto record = [&](bool okay, const std::string& what) {
    ++checks;
    if (!okay) failures.push_back(what);
  };

  for (int p : qs) {
    for (const DimVector& alpha : dims_up_to(in.quiver.num_vertices(), max_dim)) {
      std::string tag = "p=" + std::to_string(p) + " alpha=" + dim_str(alpha);
      CountResult m = moduli_count(in.quiver, st, alpha, &cache);
      record(m.raw.eval_q(p) == semistable_mass(in.quiver, st, alpha, p, budget),
             tag + " moduli");
      for (const DimVector& gamma : subvectors(alpha)) {
        CountResult g =
            grassmannian_moduli_count(in.quiver, st, alpha, gamma, &cache);
        record(g.raw.eval_q(p) ==
                   grassmannian_mass(in.quiver, st, alpha, gamma, p, budget),
               tag + " grassmannian gamma=" + dim_str(gamma));
      }
      for (const auto& parts : compositions_t(alpha, flag_steps)) {
        CountResult f = flag_moduli_count(in.quiver, st, parts, &cache);
        record(f.raw.eval_q(p) ==
                   flag_mass(in.quiver, st, alpha, parts, p, budget),
               tag + " flag");
      }
      if (format != "json")
        std::cout << tag << ": "
                  << (failures.empty() ? "ok" : "mismatch seen") << "\n";
    }
  }

  bool ok = failures.empty();
  if (format == "json") {
    json out{{"command", "verify"},
             {"ok", ok},
             {"checks", checks},
             {"failures", failures}};
    std::cout << out.dump() << "\n";
  } else {
    for (const auto& f : failures) std::cout << "FAIL " << f << "\n";
    std::cout << (ok ? "all checks pass" : "verification failed") << " ("
              << checks << " checks)\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact point counts of quiver moduli and character series"};
  app.require_subcommand(1);

  std::string quiver_path, format = "text", type;
  std::vector<int> alpha, gamma, sigma, theta, verify_with, slope_of_vec, qs,
      orientation;
  std::vector<std::vector<int>> parts;
  long long trunc = 6;
  int rank = 0, max_dim = 3, flag_steps = 3;
  bool cross_check = false;

  auto add_common = [&](CLI::App* cmd, bool needs_quiver) {
    if (needs_quiver)
      cmd->add_option("--quiver", quiver_path, "quiver file")->required();
    cmd->add_option("--sigma", sigma, "sigma weight, one entry per vertex");
    cmd->add_option("--theta", theta,
                    "theta weight, positive entries (default all ones)");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* c_moduli =
      app.add_subcommand("moduli", "semistable moduli mass of alpha");
  add_common(c_moduli, true);
  c_moduli->add_option("--alpha", alpha, "dimension vector")->required();

  CLI::App* c_grass = app.add_subcommand(
      "grass", "mass of subrepresentations of dimension gamma");
  add_common(c_grass, true);
  c_grass->add_option("--alpha", alpha, "ambient dimension vector")->required();
  c_grass->add_option("--gamma", gamma, "subrepresentation dimension")
      ->required();
  c_grass->add_flag("--cross-check", cross_check,
                    "also run the transfer-matrix evaluation");

  CLI::App* c_flag =
      app.add_subcommand("flag", "mass of filtrations with given steps");
  add_common(c_flag, true);
  c_flag->add_option("--part", parts,
                     "one filtration step (innermost first); repeatable");

  CLI::App* c_cluster = app.add_subcommand(
      "cluster-var", "quantum cluster variable of a rigid dimension vector");
  add_common(c_cluster, true);
  c_cluster->add_option("--alpha", alpha, "dimension vector")->required();
  c_cluster->add_option("--verify-with", verify_with,
                        "check the product with this dimension vector "
                        "against the extension oracle at p=2");

  CLI::App* c_series = app.add_subcommand(
      "series", "semistable, absolute, and moduli series of one slope");
  add_common(c_series, true);
  c_series->add_option("--slope-of", slope_of_vec,
                       "dimension vector selecting the slope")
      ->required();
  c_series->add_option("--trunc", trunc, "total-degree truncation");

  CLI::App* c_dilog = app.add_subcommand(
      "dilog", "verify the quantum dilogarithm identity of a Dynkin quiver");
  c_dilog->add_option("--type", type, "Dynkin type A, D, or E")->required();
  c_dilog->add_option("--rank", rank, "rank")->required();
  c_dilog->add_option("--orientation", orientation,
                      "orientation bits, one per edge (1 = low to high)");
  c_dilog->add_option("--trunc", trunc, "total-degree truncation");
  c_dilog->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* c_verify = app.add_subcommand(
      "verify", "compare the counting engine with the finite-field oracle");
  add_common(c_verify, true);
  c_verify->add_option("--q", qs, "field sizes (primes)")->required();
  c_verify->add_option("--max-dim", max_dim, "largest total dimension");
  c_verify->add_option("--flag-steps", flag_steps, "flag length t");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_moduli->parsed())
      return run_moduli(quiver_path, alpha, sigma, theta, format);
    if (c_grass->parsed())
      return run_grass(quiver_path, alpha, gamma, sigma, theta, cross_check,
                       format);
    if (c_flag->parsed())
      return run_flag(quiver_path, parts, sigma, theta, format);
    if (c_cluster->parsed())
      return run_cluster_var(quiver_path, alpha, verify_with, sigma, theta,
                             format);
    if (c_series->parsed())
      return run_series(quiver_path, slope_of_vec, trunc, sigma, theta, format);
    if (c_dilog->parsed())
      return run_dilog(type, rank, orientation, trunc, format);
    if (c_verify->parsed())
      return run_verify(quiver_path, qs, max_dim, flag_steps, sigma, theta,
                        format);
  } catch (const BudgetError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
