// Python bindings for the etrc core. The module mirrors the CLI pipeline:
// load or parse a scenario, run the design, simulate a mechanism, and query
// the analytic inter-event bounds. Matrices cross the boundary as nested
// lists of floats.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "etrc/design.hpp"
#include "etrc/errors.hpp"
#include "etrc/iet_bounds.hpp"
#include "etrc/linalg.hpp"
#include "etrc/scenario_io.hpp"

namespace py = pybind11;
using namespace etrc;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix to_matrix(const Rows& rows) {
  if (rows.empty() || rows[0].empty())
    throw Error(ErrorCategory::InvalidMatrix, "expected a nonempty nested list");
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i) {
    if (static_cast<int>(rows[i].size()) != m.cols())
      throw Error(ErrorCategory::InvalidMatrix, "ragged nested list");
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Rows from_matrix(const Matrix& m) {
  Rows rows(static_cast<std::size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) {
    rows[i].resize(static_cast<std::size_t>(m.cols()));
    for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  }
  return rows;
}

TriggerKind kind_from_name(const std::string& name) {
  if (name == "static") return TriggerKind::static_rule;
  if (name == "dynamic") return TriggerKind::dynamic_rule;
  if (name == "periodic") return TriggerKind::periodic_rule;
  throw Error(ErrorCategory::ValidationError,
              "mechanism must be static|dynamic|periodic, got '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "event-triggered robust control toolkit (core bindings)";

  py::register_exception<Error>(m, "EtrcError");

  py::class_<ScenarioConfig>(m, "Scenario")
      .def_property_readonly("name", [](const ScenarioConfig& c) { return c.name; })
      .def_property_readonly("kind",
                             [](const ScenarioConfig& c) {
                               return c.kind == UncertaintyKind::matched ? "matched"
                                                                         : "unmatched";
                             })
      .def("serialize", [](const ScenarioConfig& c) { return serialize_scenario(c); })
      .def("override", [](ScenarioConfig& c, const std::string& key,
                          const std::string& value) { apply_override(c, key, value); });

  py::class_<DesignResult>(m, "Design")
      .def_property_readonly("s", [](const DesignResult& d) { return from_matrix(d.synthesis.s); })
      .def_property_readonly("k", [](const DesignResult& d) { return from_matrix(d.synthesis.k); })
      .def_property_readonly("l",
                             [](const DesignResult& d) {
                               return d.synthesis.l.empty() ? Rows{} : from_matrix(d.synthesis.l);
                             })
      .def_readonly("lambda_min_q", &DesignResult::lambda_min_q)
      .def_readonly("mu", &DesignResult::mu)
      .def_property_readonly("residual",
                             [](const DesignResult& d) { return d.synthesis.residual; })
      .def_property_readonly("closed_loop_spectral_abscissa",
                             [](const DesignResult& d) {
                               return d.synthesis.closed_loop_spectral_abscissa;
                             })
      .def_property_readonly("l1", [](const DesignResult& d) { return d.lip.l1; })
      .def_property_readonly("l2", [](const DesignResult& d) { return d.lip.l2; });

  py::class_<SimMetrics>(m, "Metrics")
      .def_readonly("tau_max", &SimMetrics::tau_max)
      .def_readonly("tau_min", &SimMetrics::tau_min)
      .def_readonly("tau_avg", &SimMetrics::tau_avg)
      .def_readonly("u_total", &SimMetrics::u_total);

  py::class_<SimTrace>(m, "Trace")
      .def_readonly("times", &SimTrace::times)
      .def_readonly("events", &SimTrace::events)
      .def_readonly("error_norms", &SimTrace::error_norms)
      .def_readonly("thresholds", &SimTrace::thresholds)
      .def_readonly("eta", &SimTrace::eta)
      .def_readonly("metrics", &SimTrace::metrics)
      .def_property_readonly("states",
                             [](const SimTrace& t) {
                               return std::vector<Vec>(t.states.begin(), t.states.end());
                             })
      .def("csv", [](const SimTrace& t) { return trace_csv(t); });

  m.def("preset_names", &preset_names);
  m.def("preset_text", &preset_text, py::arg("name"));
  m.def("parse_scenario", &parse_scenario, py::arg("text"));
  m.def("load_scenario", &load_scenario, py::arg("name_or_path"));

  m.def("design", &design_scenario, py::arg("scenario"), py::arg("enforce_hypothesis") = true);
  m.def(
      "simulate",
      [](const ScenarioConfig& cfg, const std::string& mechanism) {
        const DesignResult d = design_scenario(cfg);
        return simulate(make_run(cfg, d, kind_from_name(mechanism)));
      },
      py::arg("scenario"), py::arg("mechanism") = "static");

  m.def(
      "static_tau",
      [](double l1, double l2, double mu) { return static_tau(l1, l2, mu); },
      py::arg("l1"), py::arg("l2"), py::arg("mu"));
  m.def(
      "dynamic_tau",
      [](double l1, double l2, double mu, double theta, double lam) {
        return dynamic_tau(l1, l2, mu, theta, lam);
      },
      py::arg("l1"), py::arg("l2"), py::arg("mu"), py::arg("theta"), py::arg("lambda"));

  m.def(
      "spectral_norm", [](const Rows& rows) { return spectral_norm(to_matrix(rows)); },
      py::arg("m"));
  m.def(
      "sym_eigenvalues", [](const Rows& rows) { return sym_eigenvalues(to_matrix(rows)); },
      py::arg("m"));
  m.def(
      "pseudo_inverse", [](const Rows& rows) { return from_matrix(pseudo_inverse(to_matrix(rows))); },
      py::arg("m"));
  m.def(
      "is_positive_definite",
      [](const Rows& rows, double tol) { return is_positive_definite(to_matrix(rows), tol); },
      py::arg("m"), py::arg("tol") = 0.0);
}
