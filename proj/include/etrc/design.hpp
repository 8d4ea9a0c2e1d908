#pragma once

#include <string>
#include <vector>

#include "etrc/iet_bounds.hpp"
#include "etrc/riccati.hpp"
#include "etrc/scenario_io.hpp"
#include "etrc/simulator.hpp"
#include "etrc/triggering.hpp"
#include "etrc/uncertainty.hpp"

namespace etrc {

/// Everything the controller-design stage produces for one scenario:
/// uncertainty bounds, the robust gain, the certified decrease matrix, the
/// event threshold, and the Lipschitz data used for inter-event bounds.
struct DesignResult {
  UncertainPlant plant;
  std::vector<Vec> p_grid;
  UncertaintyBounds bounds;
  RobustSynthesis synthesis;

  /// Decrease certificate matrix: the worst-case state-weight for matched
  /// scenarios, beta^2 I - 2 rho^2 L^T L (with the configured-formula L)
  /// otherwise. Its smallest eigenvalue feeds the trigger threshold.
  Matrix q_cert;
  double lambda_min_q = 0.0;
  Vec p_worst;  // matched only: grid point attaining the minimum

  double mu = 0.0;  // event threshold coefficient
  LipschitzConstants lip;
};

/// Run the full design pipeline for a parsed scenario.
///
/// `enforce_hypothesis` mirrors the synthesis flag: when false, an indefinite
/// decrease matrix is reported through `lambda_min_q` instead of an error.
DesignResult design_scenario(const ScenarioConfig& config, bool enforce_hypothesis = true);

/// Assemble the trigger rule for one mechanism from a design and the
/// scenario's trigger settings.
TriggerRule make_rule(const ScenarioConfig& config, const DesignResult& design, TriggerKind kind);

/// Assemble a simulator run for one mechanism.
ScenarioRun make_run(const ScenarioConfig& config, const DesignResult& design, TriggerKind kind);

}  // namespace etrc
