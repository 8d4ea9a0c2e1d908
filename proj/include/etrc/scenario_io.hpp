#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "etrc/riccati.hpp"
#include "etrc/simulator.hpp"
#include "etrc/uncertainty.hpp"

namespace etrc {

/// Trigger block of a scenario file. All three mechanisms keep their
/// parameters side by side so one scenario can drive comparison runs;
/// `kind` only selects the default mechanism. The dynamic decay rate is
/// specified through k as lambda = (1 - sigma) k, with an optional direct
/// lambda override.
struct TriggerConfig {
  TriggerKind kind = TriggerKind::static_rule;
  double sigma = 0.98;
  double theta = 0.1;
  double k = 0.6;
  std::optional<double> lambda_override;
  double eta0 = 0.0;
  double period = 1e-3;

  double lambda() const { return lambda_override ? *lambda_override : (1.0 - sigma) * k; }

  bool operator==(const TriggerConfig&) const = default;
};

struct SimConfig {
  Vec x0;
  double horizon = 1.0;
  double dt = 1e-4;
  double grid_step = 0.01;

  bool operator==(const SimConfig&) const = default;
};

/// Parsed scenario: plant, design weights/parameters, optional explicit
/// bound matrices, trigger parameters, and simulation settings.
struct ScenarioConfig {
  std::string name;
  UncertaintyKind kind = UncertaintyKind::matched;

  // plant
  Matrix a_nominal;
  Matrix b;
  std::vector<Matrix> delta_coeffs;
  Vec p_min, p_max;
  PTrajectory p_trajectory;

  // weights (matched)
  std::optional<Matrix> q, r;

  // params (unmatched)
  double alpha = 1.0;
  double rho = 0.0;
  double beta = 0.0;
  LFormula l_formula = LFormula::derived;

  // optional explicit bounds
  std::optional<Matrix> f_m, f, f_u, h;

  TriggerConfig trigger;
  SimConfig sim;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parse scenario text (INI-style sections of key = value; matrices as
/// bracketed row lists). Errors carry the offending line or field.
ScenarioConfig parse_scenario(const std::string& text);

/// Inverse of parse_scenario: emits text that parses back to an equal config.
std::string serialize_scenario(const ScenarioConfig& config);

/// Built-in scenario names.
std::vector<std::string> preset_names();
/// Source text of a built-in scenario (UnknownPreset otherwise).
std::string preset_text(const std::string& name);
/// Parsed built-in scenario.
ScenarioConfig preset(const std::string& name);
/// Resolve a preset name or a path to scenario text and parse it.
ScenarioConfig load_scenario(const std::string& name_or_path);

/// Plant view of a scenario.
UncertainPlant make_plant(const ScenarioConfig& config);
/// Bound-parameter view of a scenario.
BoundParams make_bound_params(const ScenarioConfig& config);

/// Apply a dotted-path override such as "trigger.sigma=0.7" or
/// "sim.horizon=3". Unknown paths raise ValidationError.
void apply_override(ScenarioConfig& config, const std::string& key, const std::string& value);

/// Write the trace as CSV with columns
///   t, x1..xn, u1..um, err_norm, threshold, eta, event_flag
/// (9 significant digits, '.' decimal separator, '\n' line endings).
void write_trace_csv(const SimTrace& trace, const std::string& path);
std::string trace_csv(const SimTrace& trace);

/// Parse a trace CSV back (inverse of write_trace_csv up to formatting
/// precision); event times are reconstructed from the flag column and
/// metrics recomputed.
SimTrace read_trace_csv(const std::string& path);

/// Comparison table over named runs, columns
///   mechanism, tau_max, tau_min, tau_avg, u_total.
std::string metrics_table(const std::vector<std::pair<std::string, SimMetrics>>& runs);
void write_metrics_table(const std::vector<std::pair<std::string, SimMetrics>>& runs,
                         const std::string& path);

/// Fixed 9-significant-digit formatting used by every serialized number.
std::string format_sig9(double v);

}  // namespace etrc
