#include "etrc/design.hpp"

#include "etrc/errors.hpp"
#include "etrc/linalg.hpp"

namespace etrc {

DesignResult design_scenario(const ScenarioConfig& config, bool enforce_hypothesis) {
  DesignResult d;
  d.plant = make_plant(config);
  d.p_grid = make_p_grid(d.plant, config.sim.grid_step);

  // The declared kind must agree with the structure of the uncertainty;
  // a silent mismatch would certify against the wrong decrease matrix.
  const MatchedClassification cls = classify_matched(d.plant, d.p_grid);
  if (config.kind == UncertaintyKind::matched && !cls.matched)
    throw Error(ErrorCategory::ValidationError,
                "scenario declares matched uncertainty but (I - B B+) dA(p) != 0 on the grid");
  if (config.kind == UncertaintyKind::unmatched && cls.matched &&
      !d.plant.delta_coeffs.empty())
    throw Error(ErrorCategory::ValidationError,
                "scenario declares unmatched uncertainty but dA(p) lies in range(B); "
                "use kind = matched");

  const Matrix r = config.r ? *config.r : Matrix::identity(d.plant.m());
  d.bounds = bound_matrices(d.plant, make_bound_params(config), d.p_grid, r);

  if (config.kind == UncertaintyKind::matched) {
    d.synthesis = synthesize_matched(d.plant, d.bounds, *config.q, r, d.p_grid);
    const Q1Report q1 =
        q1_worst(d.synthesis.k, d.plant, r, *config.q, d.bounds.f_m, d.p_grid);
    d.q_cert = q1.q1;
    d.lambda_min_q = q1.lambda_min;
    d.p_worst = q1.p_worst;
  } else {
    d.synthesis = synthesize_unmatched(d.plant, d.bounds, config.l_formula,
                                       enforce_hypothesis, d.p_grid);
    d.q_cert = q2_matrix(d.synthesis.l, config.rho, config.beta);
    d.lambda_min_q = sym_eigenvalues(d.q_cert).front();
  }

  // With hypothesis enforcement disabled the decrease matrix may be
  // indefinite; leave mu at zero then (the design is for inspection only).
  if (d.lambda_min_q > 0.0)
    d.mu = threshold_mu(d.synthesis.s, d.plant.b, d.synthesis.k, d.lambda_min_q,
                        config.trigger.sigma);
  d.lip = lipschitz_constants(d.plant, d.synthesis.k, d.p_grid);
  return d;
}

TriggerRule make_rule(const ScenarioConfig& config, const DesignResult& design,
                      TriggerKind kind) {
  TriggerRule rule;
  rule.kind = kind;
  rule.mu = design.mu;
  rule.sigma = config.trigger.sigma;
  rule.theta = config.trigger.theta;
  rule.lambda = config.trigger.lambda();
  rule.eta0 = config.trigger.eta0;
  rule.period = config.trigger.period;
  return rule;
}

ScenarioRun make_run(const ScenarioConfig& config, const DesignResult& design,
                     TriggerKind kind) {
  ScenarioRun run;
  run.plant = design.plant;
  run.synthesis = design.synthesis;
  run.rule = make_rule(config, design, kind);
  run.x0 = config.sim.x0;
  run.horizon = config.sim.horizon;
  run.dt = config.sim.dt;
  return run;
}

}  // namespace etrc
