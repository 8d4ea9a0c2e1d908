#include "etrc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "etrc/errors.hpp"
#include "etrc/linalg.hpp"
#include "etrc/tolerances.hpp"

namespace etrc {

namespace {

/// Augmented right-hand side: plant state plus (for dynamic rules) eta.
/// u is held constant across the step; p(t) is evaluated at stage times.
struct StepContext {
  const UncertainPlant* plant;
  const TriggerRule* rule;
  const Vec* x_held;
  Vec bu;  ///< B * u_held, precomputed per event interval
};

/// One classical RK4 step of (x, eta) over [t, t + dt].
void rk4_step(const StepContext& ctx, double t, double dt, Vec& x, double& eta) {
  const int n = static_cast<int>(x.size());
  const bool dynamic = ctx.rule->kind == TriggerKind::dynamic_rule;

  // Stage derivative at (tt, xs, es): dx = A(p(tt)) xs + B u,
  // deta = -lambda eta_s + (mu ||xs|| - ||e_s||) with e_s = x_held - xs.
  const auto deriv = [&](double tt, const Vec& xs, double eta_s, Vec& dx, double& deta) {
    const Matrix a = ctx.plant->a_at(ctx.plant->p_trajectory(tt));
    dx = mat_vec(a, xs);
    for (int i = 0; i < n; ++i) dx[i] += ctx.bu[i];
    if (dynamic) {
      Vec e(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) e[i] = (*ctx.x_held)[i] - xs[i];
      deta = -ctx.rule->lambda * eta_s + (ctx.rule->mu * norm2(xs) - norm2(e));
    } else {
      deta = 0.0;
    }
  };

  Vec k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size());
  double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0;
  Vec xs(x.size());

  deriv(t, x, eta, k1, e1);
  for (int i = 0; i < n; ++i) xs[i] = x[i] + 0.5 * dt * k1[i];
  deriv(t + 0.5 * dt, xs, eta + 0.5 * dt * e1, k2, e2);
  for (int i = 0; i < n; ++i) xs[i] = x[i] + 0.5 * dt * k2[i];
  deriv(t + 0.5 * dt, xs, eta + 0.5 * dt * e2, k3, e3);
  for (int i = 0; i < n; ++i) xs[i] = x[i] + dt * k3[i];
  deriv(t + dt, xs, eta + dt * e3, k4, e4);

  for (int i = 0; i < n; ++i) x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  eta += dt / 6.0 * (e1 + 2.0 * e2 + 2.0 * e3 + e4);
}

}  // namespace

SimTrace simulate(const ScenarioRun& run) {
  const int n = run.plant.n();
  if (static_cast<int>(run.x0.size()) != n)
    throw Error(ErrorCategory::ValidationError, "simulate: x0 dimension mismatch");
  if (!(run.dt > 0.0) || !(run.horizon >= run.dt))
    throw Error(ErrorCategory::ValidationError, "simulate: need dt > 0 and horizon >= dt");
  if (run.rule.kind == TriggerKind::periodic_rule && !(run.rule.period > 0.0))
    throw Error(ErrorCategory::ValidationError, "simulate: periodic rule needs a positive period");

  const long nsteps = std::lround(run.horizon / run.dt);
  const bool dynamic = run.rule.kind == TriggerKind::dynamic_rule;

  SimTrace trace;
  trace.times.reserve(nsteps + 1);

  Vec x = run.x0;
  double eta = dynamic ? run.rule.eta0 : 0.0;
  TriggerState tstate;
  tstate.x_held = x;
  tstate.eta = eta;
  tstate.last_event_time = 0.0;

  // The first event happens at t = 0: the initial state is transmitted and
  // the first input computed from it.
  Vec u_held = mat_vec(run.synthesis.k, tstate.x_held);
  StepContext ctx{&run.plant, &run.rule, &tstate.x_held, mat_vec(run.plant.b, u_held)};
  trace.events.push_back(0.0);

  const auto threshold_of = [&](const Vec& xs, double eta_s) {
    switch (run.rule.kind) {
      case TriggerKind::static_rule: return run.rule.mu * norm2(xs);
      case TriggerKind::dynamic_rule: return eta_s / run.rule.theta + run.rule.mu * norm2(xs);
      case TriggerKind::periodic_rule: return 0.0;
    }
    return 0.0;
  };

  const auto log_row = [&](double t, const Vec& err, int fired) {
    trace.times.push_back(t);
    trace.states.push_back(x);
    trace.inputs.push_back(u_held);
    trace.error_norms.push_back(norm2(err));
    trace.thresholds.push_back(threshold_of(x, eta));
    trace.eta.push_back(eta);
    trace.event_flags.push_back(fired);
  };

  log_row(0.0, Vec(static_cast<std::size_t>(n), 0.0), 1);

  Vec err(static_cast<std::size_t>(n));
  for (long step = 0; step < nsteps; ++step) {
    const double t = static_cast<double>(step) * run.dt;
    rk4_step(ctx, t, run.dt, x, eta);
    const double t_next = static_cast<double>(step + 1) * run.dt;

    if (norm2(x) > kTol.divergence_norm)
      throw Error(ErrorCategory::Diverged,
                  "simulate: ||x|| exceeded " + std::to_string(kTol.divergence_norm) + " at t=" +
                      std::to_string(t_next));

    for (int i = 0; i < n; ++i) err[i] = tstate.x_held[i] - x[i];

    // Rule evaluation once per step, after integration.
    bool fire = false;
    switch (run.rule.kind) {
      case TriggerKind::static_rule:
        fire = static_should_fire(x, err, run.rule.mu);
        break;
      case TriggerKind::dynamic_rule:
        fire = dynamic_should_fire(eta, x, err, run.rule);
        break;
      case TriggerKind::periodic_rule:
        fire = periodic_should_fire(t_next, tstate.last_event_time, run.rule.period);
        break;
    }
    // Suppress trigger chatter at the origin: with both norms at numerical
    // zero the static rule would fire every step to no effect.
    if (run.rule.kind != TriggerKind::periodic_rule && norm2(x) < kTol.origin_suppression &&
        norm2(err) < kTol.origin_suppression)
      fire = false;

    // The logged row keeps the error the rule saw; the refresh below takes
    // effect from the next step.
    log_row(t_next, err, fire ? 1 : 0);

    if (fire) {
      tstate.x_held = x;
      tstate.last_event_time = t_next;
      u_held = mat_vec(run.synthesis.k, tstate.x_held);
      ctx.bu = mat_vec(run.plant.b, u_held);
      trace.events.push_back(t_next);
    }
    tstate.eta = eta;
  }

  trace.metrics = compute_metrics(trace.events);
  return trace;
}

SimMetrics compute_metrics(const std::vector<double>& events) {
  if (events.size() < 2)
    throw Error(ErrorCategory::TooFewEvents,
                "metrics: need at least two events, got " + std::to_string(events.size()));
  SimMetrics m;
  m.u_total = static_cast<long>(events.size());
  m.tau_min = events[1] - events[0];
  m.tau_max = m.tau_min;
  for (std::size_t i = 1; i + 1 < events.size(); ++i) {
    const double gap = events[i + 1] - events[i];
    m.tau_min = std::min(m.tau_min, gap);
    m.tau_max = std::max(m.tau_max, gap);
  }
  m.tau_avg = (events.back() - events.front()) / static_cast<double>(events.size() - 1);
  return m;
}

DecreaseReport lyapunov_diagnostics(const SimTrace& trace, const RobustSynthesis& synthesis,
                                    const Matrix& q_matrix, double sigma) {
  DecreaseReport report;
  if (trace.times.size() < 2) {
    report.pass = true;  // a constant trace decreases trivially
    return report;
  }
  const double lambda_min_q = sym_eigenvalues(symmetrize(q_matrix)).front();

  // Composite function: V = x^T S x, plus eta for dynamic traces (the eta
  // column is identically zero otherwise, so one formula covers both).
  std::vector<double> v(trace.times.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = quad_form(trace.states[i], synthesis.s) + trace.eta[i];

  bool first = true;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double dt = trace.times[i + 1] - trace.times[i];
    const double vdot = (v[i + 1] - v[i]) / dt;
    const double nx = norm2(trace.states[i]);
    const double target = (sigma - 1.0) * lambda_min_q * nx * nx;
    const double violation = vdot - target;
    report.max_abs_vdot = std::max(report.max_abs_vdot, std::abs(vdot));
    if (first || violation > report.max_violation) {
      report.max_violation = violation;
      first = false;
    }
  }
  report.tolerance = kTol.decrease_tol_rel * report.max_abs_vdot;
  report.pass = report.max_violation <= report.tolerance;
  return report;
}

}  // namespace etrc
