#pragma once

#include "etrc/matrix.hpp"

namespace etrc {

enum class TriggerKind { static_rule, dynamic_rule, periodic_rule };

/// Event-triggering rule parameters.
///   static:   fire when ||e|| >= mu ||x||
///   dynamic:  eta' = -lambda eta + (mu ||x|| - ||e||),
///             fire when eta + theta (mu ||x|| - ||e||) <= 0
///   periodic: fire every `period` seconds (baseline mechanism)
struct TriggerRule {
  TriggerKind kind = TriggerKind::static_rule;
  double mu = 0.0;      ///< threshold slope (static/dynamic)
  double sigma = 0.0;   ///< design fraction that produced mu (bookkeeping)
  double theta = 0.0;   ///< dynamic mixing weight
  double lambda = 0.0;  ///< dynamic decay rate
  double eta0 = 0.0;    ///< dynamic initial internal state
  double period = 0.0;  ///< periodic sampling interval
};

/// Mutable trigger bookkeeping owned by one simulation run.
struct TriggerState {
  Vec x_held;                   ///< last transmitted state x(t_k)
  double eta = 0.0;             ///< dynamic internal variable
  double last_event_time = 0.0;
};

/// Static rule decision: true iff ||e|| >= mu ||x|| (the boundary fires).
bool static_should_fire(const Vec& x, const Vec& e, double mu);

/// Dynamic rule decision at given eta (evaluated after the eta update).
bool dynamic_should_fire(double eta, const Vec& x, const Vec& e, const TriggerRule& rule);

/// Standalone one-step eta advance (classical RK4 on the scalar dynamics,
/// with ||x|| and ||e|| frozen at the supplied values) followed by the fire
/// decision. The simulator integrates eta jointly with the plant so stage
/// values of x enter the eta stages; this free function covers the
/// decision-level uses (recorded traces, rule analysis).
struct DynamicStep {
  bool fire = false;
  double eta = 0.0;
};
DynamicStep dynamic_step(const TriggerState& state, const Vec& x, const Vec& e,
                         const TriggerRule& rule, double dt);

/// Periodic baseline: true iff t - last_event >= period (within slack).
bool periodic_should_fire(double t, double last_event, double period);

}  // namespace etrc
