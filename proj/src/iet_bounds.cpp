#include "etrc/iet_bounds.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "etrc/errors.hpp"
#include "etrc/tolerances.hpp"

namespace etrc {

namespace {

void check_static_constants(double l1, double l2, double mu) {
  if (!(l1 > 0.0))
    throw Error(ErrorCategory::InvalidConstants, "l1 must be positive, got " + std::to_string(l1));
  if (!(l2 >= 0.0))
    throw Error(ErrorCategory::InvalidConstants, "l2 must be nonnegative, got " + std::to_string(l2));
  if (!(mu > 0.0))
    throw Error(ErrorCategory::InvalidConstants, "mu must be positive, got " + std::to_string(mu));
}

/// Adaptive Simpson with absolute tolerance; the integrands here are smooth
/// and strictly positive, so plain interval halving converges quickly.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double static_tau(double l1, double l2, double mu) {
  check_static_constants(l1, l2, mu);
  if (l1 == l2) return mu / (l1 * (1.0 + mu));
  // log1p keeps the expression accurate when l1 and l2 nearly coincide.
  return std::log1p((l1 - l2) * mu / (l2 * mu + l1)) / (l1 - l2);
}

double dynamic_tau(double l1, double l2, double mu, double theta, double lambda) {
  check_static_constants(l1, l2, mu);
  if (!(theta > 0.0))
    throw Error(ErrorCategory::InvalidConstants, "theta must be positive, got " + std::to_string(theta));
  if (!(lambda >= 0.0))
    throw Error(ErrorCategory::InvalidConstants,
                "lambda must be nonnegative, got " + std::to_string(lambda));
  if (l1 > lambda && theta > 1.0 / (l1 - lambda))
    std::cerr << "warning: dynamic_tau: theta=" << theta << " exceeds 1/(l1-lambda)="
              << 1.0 / (l1 - lambda) << "; bound computed outside the preferred range\n";

  const double c0 = l1 / mu;
  const double c1 = l2 + lambda;
  const double c2 = 1.0 / theta + l2 * mu;  // theta = +inf degrades gracefully to l2 mu
  const auto integrand = [&](double g) { return 1.0 / (c0 + c1 * g + c2 * g * g); };
  return integrate(integrand, 0.0, mu, kTol.simpson_abs);
}

}  // namespace etrc
