#pragma once

#include "etrc/triggering.hpp"

namespace etrc {

/// Analytic inter-event-time lower bound together with the constants that
/// produced it.
struct IetBound {
  TriggerKind kind = TriggerKind::static_rule;
  double tau = 0.0;
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
  double mu = 0.0;
  double theta = 0.0, lambda = 0.0;  ///< dynamic only
};

/// Static-trigger bound: exact time for the error-ratio comparison ODE
///   w' = l1 + (l1 + l2) w + l2 w^2,  w(0) = 0
/// to reach mu. The quadratic factors as (l2 w + l1)(w + 1), giving
///   tau = ln(l1 (mu + 1) / (l2 mu + l1)) / (l1 - l2)
/// with the l1 = l2 limit mu / (l1 (1 + mu)).
/// Throws InvalidConstants unless l1 > 0, l2 >= 0, mu > 0.
double static_tau(double l1, double l2, double mu);

/// Dynamic-trigger bound: adaptive-Simpson quadrature of
///   tau = integral_0^mu dG / (l1/mu + (l2 + lambda) G + (1/theta + l2 mu) G^2).
/// Validity prefers 0 < theta <= 1/(l1 - lambda) when l1 > lambda; a theta
/// beyond that range produces a warning on stderr but is still computed.
/// Throws InvalidConstants unless l1 > 0, l2 >= 0, mu > 0, theta > 0,
/// lambda >= 0.
double dynamic_tau(double l1, double l2, double mu, double theta, double lambda);

}  // namespace etrc
