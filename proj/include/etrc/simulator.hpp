#pragma once

#include <vector>

#include "etrc/matrix.hpp"
#include "etrc/riccati.hpp"
#include "etrc/triggering.hpp"
#include "etrc/uncertainty.hpp"

namespace etrc {

/// One closed-loop simulation job.
struct ScenarioRun {
  UncertainPlant plant;
  RobustSynthesis synthesis;
  TriggerRule rule;
  Vec x0;
  double horizon = 0.0;
  double dt = 1e-4;
};

/// Event statistics in the reporting layout: inter-event extremes, the mean
/// gap, and the number of control computations.
struct SimMetrics {
  double tau_max = 0.0;
  double tau_min = 0.0;
  double tau_avg = 0.0;
  long u_total = 0;
};

/// Full fixed-step trace. All per-step vectors share the same length; the
/// input column is piecewise constant (zero-order hold) and changes value
/// only on rows whose event flag is set. `error_norms` holds the measurement
/// error the rule evaluated at that instant (so the sawtooth and its reset
/// are both visible), `thresholds` the rule's comparison level
/// (mu ||x|| statically, eta/theta + mu ||x|| dynamically).
struct SimTrace {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Vec> inputs;
  std::vector<double> error_norms;
  std::vector<double> thresholds;
  std::vector<double> eta;        ///< zero for non-dynamic runs
  std::vector<int> event_flags;   ///< 1 on rows where the rule fired
  std::vector<double> events;     ///< event times, starting with t = 0
  SimMetrics metrics;
};

/// Integrate the closed loop x' = A(p(t)) x + B u with u held at K x(t_k)
/// between events (classical RK4, p evaluated at stage times, eta integrated
/// jointly for dynamic rules). The rule is checked once per step after
/// integration; on a fire the held state and input refresh take effect from
/// the start of the next step. Throws Diverged when ||x|| exceeds the guard.
SimTrace simulate(const ScenarioRun& run);

/// Event statistics of a completed trace; needs at least two events
/// (TooFewEvents otherwise).
SimMetrics compute_metrics(const std::vector<double>& events);

/// Finite-difference certificate of the triggered Lyapunov decrease along a
/// trace: V = x^T S x plus eta for dynamic runs, with target slope
/// (sigma - 1) lambda_min(Q) ||x||^2. Passing means
///   max_t [dV/dt - target] <= tol_rel * max_t |dV/dt|.
struct DecreaseReport {
  double max_violation = 0.0;  ///< worst dV/dt excess over the target
  double max_abs_vdot = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};
DecreaseReport lyapunov_diagnostics(const SimTrace& trace, const RobustSynthesis& synthesis,
                                    const Matrix& q_matrix, double sigma);

}  // namespace etrc
