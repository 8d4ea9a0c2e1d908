#include "etrc/triggering.hpp"

#include "etrc/errors.hpp"
#include "etrc/tolerances.hpp"

namespace etrc {

bool static_should_fire(const Vec& x, const Vec& e, double mu) {
  // Fire when mu ||x|| - ||e|| <= 0; equality counts as a fire.
  return norm2(e) >= mu * norm2(x);
}

bool dynamic_should_fire(double eta, const Vec& x, const Vec& e, const TriggerRule& rule) {
  return eta + rule.theta * (rule.mu * norm2(x) - norm2(e)) <= 0.0;
}

DynamicStep dynamic_step(const TriggerState& state, const Vec& x, const Vec& e,
                         const TriggerRule& rule, double dt) {
  if (rule.kind != TriggerKind::dynamic_rule)
    throw Error(ErrorCategory::ValidationError, "dynamic_step: rule is not dynamic");
  if (dt <= 0.0)
    throw Error(ErrorCategory::ValidationError, "dynamic_step: dt must be positive");
  // eta' = -lambda eta + s with s = mu ||x|| - ||e|| held constant over the
  // step; classical RK4 to match the plant integrator.
  const double s = rule.mu * norm2(x) - norm2(e);
  const auto f = [&](double eta) { return -rule.lambda * eta + s; };
  const double k1 = f(state.eta);
  const double k2 = f(state.eta + 0.5 * dt * k1);
  const double k3 = f(state.eta + 0.5 * dt * k2);
  const double k4 = f(state.eta + dt * k3);
  DynamicStep out;
  out.eta = state.eta + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  out.fire = dynamic_should_fire(out.eta, x, e, rule);
  return out;
}

bool periodic_should_fire(double t, double last_event, double period) {
  if (period <= 0.0)
    throw Error(ErrorCategory::ValidationError, "periodic_should_fire: period must be positive");
  return t - last_event >= period - kTol.periodic_slack;
}

}  // namespace etrc
