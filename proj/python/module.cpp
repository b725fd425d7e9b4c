/*
 * Python face of the library.  Exact results cross the boundary as strings
 * (polynomials in q, rational functions in v) or plain ints; nothing here
 * rounds.
 */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qhall/cluster.hpp"
#include "qhall/count.hpp"
#include "qhall/dilog.hpp"
#include "qhall/exactq.hpp"
#include "qhall/lambdaring.hpp"
#include "qhall/quiver.hpp"
#include "qhall/series.hpp"

namespace py = pybind11;
using namespace qhall;

namespace {

Stability make_stability(const Quiver& q, const std::vector<int>& sigma,
                         const std::optional<std::vector<int>>& theta) {
  Stability st;
  st.sigma = sigma;
  st.theta = theta ? *theta : Weight(q.num_vertices(), 1);
  validate_stability(q, st);
  return st;
}

py::dict count_dict(const CountResult& res) {
  py::dict d;
  d["raw"] = res.raw.str();
  if (res.normalized)
    d["normalized"] = res.normalized->str();
  else
    d["normalized"] = py::none();
  d["coprime"] = res.coprime;
  d["nonneg"] = res.nonneg;
  return d;
}

py::tuple key_tuple(const SeriesKey& k) {
  py::tuple t(k.size());
  for (size_t i = 0; i < k.size(); ++i) t[i] = k[i];
  return t;
}

}  // namespace

PYBIND11_MODULE(_qhall, m) {
  m.doc() =
      "exact point counts of quiver moduli, character series, quantum "
      "cluster variables, and dilogarithm identities";

  py::class_<Quiver>(m, "Quiver")
      .def_property_readonly("num_vertices", &Quiver::num_vertices)
      .def_property_readonly("euler_matrix", &Quiver::euler_matrix)
      .def("euler_form", &Quiver::euler_form, py::arg("a"), py::arg("b"))
      .def("__repr__", [](const Quiver& q) {
        return "Quiver(" + q.canonical_string() + ")";
      });

  m.def("kronecker_quiver", &kronecker_quiver, py::arg("arrows"));
  m.def("linear_quiver", &linear_quiver, py::arg("n"));
  m.def(
      "dynkin_quiver",
      [](char type, int rank, const std::vector<bool>& orientation) {
        return dynkin_quiver(type, rank, orientation);
      },
      py::arg("type"), py::arg("rank"),
      py::arg("orientation") = std::vector<bool>{});
  m.def(
      "parse_quiver",
      [](const std::string& text) {
        QuiverInput in = parse_quiver_any(text);
        py::dict d;
        d["quiver"] = in.quiver;
        if (in.has_sigma)
          d["sigma"] = in.stability.sigma;
        else
          d["sigma"] = py::none();
        d["theta"] = in.stability.theta;
        return d;
      },
      py::arg("text"),
      "Parse the text or JSON quiver format; sigma is None when absent.");

  m.def(
      "moduli_count",
      [](const Quiver& q, const std::vector<int>& sigma,
         const std::vector<int>& alpha,
         const std::optional<std::vector<int>>& theta) {
        return count_dict(moduli_count(q, make_stability(q, sigma, theta), alpha));
      },
      py::arg("quiver"), py::arg("sigma"), py::arg("alpha"),
      py::arg("theta") = py::none(),
      "Semistable moduli mass at dimension alpha; normalized is the point "
      "count polynomial when the weight is alpha-coprime.");

  m.def(
      "grassmannian_count",
      [](const Quiver& q, const std::vector<int>& sigma,
         const std::vector<int>& alpha, const std::vector<int>& gamma,
         const std::optional<std::vector<int>>& theta) {
        return count_dict(grassmannian_moduli_count(
            q, make_stability(q, sigma, theta), alpha, gamma));
      },
      py::arg("quiver"), py::arg("sigma"), py::arg("alpha"), py::arg("gamma"),
      py::arg("theta") = py::none(),
      "Mass of pairs (semistable M, subrepresentation of dimension gamma).");

  m.def(
      "flag_count",
      [](const Quiver& q, const std::vector<int>& sigma,
         const std::vector<std::vector<int>>& parts,
         const std::optional<std::vector<int>>& theta) {
        return count_dict(
            flag_moduli_count(q, make_stability(q, sigma, theta), parts));
      },
      py::arg("quiver"), py::arg("sigma"), py::arg("parts"),
      py::arg("theta") = py::none(),
      "Mass of flags with the given subquotient dimensions, innermost first.");

  m.def(
      "moduli_series",
      [](const Quiver& q, const std::vector<int>& sigma,
         const std::vector<int>& slope_probe, long long truncation,
         const std::optional<std::vector<int>>& theta) {
        Stability st = make_stability(q, sigma, theta);
        Slope mu = slope_of(st, slope_probe);
        ModuliSeries ms = moduli_series(q, st, mu, truncation);
        std::set<SeriesKey> keys;
        for (const auto& [k, c] : ms.semistable.terms()) keys.insert(k);
        for (const auto& [k, c] : ms.absolute.terms()) keys.insert(k);
        for (const auto& [k, c] : ms.relative.terms()) keys.insert(k);
        py::dict entries;
        for (const auto& k : keys) {
          if (dim_is_zero(k)) continue;
          py::dict e;
          e["rss"] = ms.semistable.coeff(k).str();
          e["a"] = ms.absolute.coeff(k).str();
          e["m"] = ms.relative.coeff(k).str();
          entries[key_tuple(k)] = e;
        }
        py::dict d;
        d["slope"] = mu.str();
        d["truncation"] = truncation;
        d["entries"] = entries;
        return d;
      },
      py::arg("quiver"), py::arg("sigma"), py::arg("slope_of"),
      py::arg("truncation") = 6, py::arg("theta") = py::none(),
      "Fixed-slope semistable series with its plethystic absolute and "
      "relative (moduli) companions.");

  m.def(
      "cluster_variable",
      [](const Quiver& q, const std::vector<int>& sigma,
         const std::vector<int>& alpha,
         const std::optional<std::vector<int>>& theta) {
        PrincipalFrame frame(q);
        Stability st = make_stability(frame.quiver(), sigma, theta);
        auto grc = rigid_grassmannian_table(frame.quiver(), st, alpha);
        return cluster_variable(frame, alpha, grc).str();
      },
      py::arg("quiver"), py::arg("sigma"), py::arg("alpha"),
      py::arg("theta") = py::none(),
      "Quantum cluster variable with principal coefficients of the generic "
      "rigid module of dimension alpha, as a Laurent string.");

  m.def(
      "verify_dynkin_identity",
      [](char type, int rank, const std::vector<bool>& orientation,
         long long truncation) {
        DilogReport r = verify_dynkin_identity(type, rank, orientation,
                                               truncation);
        py::dict d;
        d["ok"] = r.ok;
        d["simples_match"] = r.simples_match;
        d["indec_match"] = r.indec_match;
        d["first_diff"] = r.first_diff;
        return d;
      },
      py::arg("type"), py::arg("rank"),
      py::arg("orientation") = std::vector<bool>{},
      py::arg("truncation") = 6,
      "Check the quantum dilogarithm identity: simple and indecomposable "
      "orderings against the full character series.");
}
