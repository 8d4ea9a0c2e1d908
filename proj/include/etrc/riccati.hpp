#pragma once

#include <optional>

#include "etrc/matrix.hpp"
#include "etrc/uncertainty.hpp"

namespace etrc {

/// Which auxiliary-gain formula to report for unmatched syntheses. The
/// stationarity condition of the underlying optimization yields the
/// rho^-2 form ("derived"); the rho^2 variant ("printed") is kept as a
/// configuration switch for comparison. The internal stability and decrease
/// certificates always use the derived form, which is the one the Riccati
/// design loop actually stabilizes.
enum class LFormula { derived, printed };

/// Result of a robust gain synthesis. For matched plants `k` is the state
/// feedback K1 and `l` is empty; for unmatched plants `k` is K2 and `l` is
/// the auxiliary gain in the requested formula (with `l_derived` always
/// holding the derivation-consistent one).
struct RobustSynthesis {
  UncertaintyKind kind = UncertaintyKind::matched;
  Matrix s;           ///< stabilizing Riccati solution (symmetric PD)
  Matrix k;           ///< feedback gain, m x n
  Matrix l;           ///< auxiliary gain as reported (unmatched only)
  Matrix l_derived;   ///< rho^-2 auxiliary gain (unmatched only)
  double residual = 0.0;                       ///< Frobenius norm of the Riccati residual
  double closed_loop_spectral_abscissa = 0.0;  ///< of the nominal design loop
};

/// Frobenius norm of S A + A^T S + Q - S B R^-1 B^T S.
double care_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                     const Matrix& s);

/// Stabilizing solution of the continuous algebraic Riccati equation
///   S A + A^T S + Q - S B R^-1 B^T S = 0
/// by Newton–Kleinman iteration. Each step solves a Lyapunov equation; the
/// initial stabilizing gain comes from pole-pushing (K0 = -c B^T for growing
/// c) with an eigenvalue-shift fallback. The returned solution carries a
/// certified residual <= tol * (1 + ||S||_F^2) and a stable closed loop.
///
/// `k0_init` overrides the initializer (it must be stabilizing); used to
/// check uniqueness of the stabilizing solution.
Matrix solve_care(const Matrix& a, const Matrix& b_eff, const Matrix& q_eff,
                  const Matrix& r_eff, const std::optional<Matrix>& k0_init = std::nullopt);

/// Matched robust synthesis: solves the modified Riccati equation with
/// Q_eff = Q + F_m, sets K1 = -R^-1 B^T S, and certifies on the parameter
/// grid that 2 x^T S (A(p) + B K1) x <= -x^T x for randomized states
/// (RobustnessCheckFailed otherwise).
RobustSynthesis synthesize_matched(const UncertainPlant& plant, const UncertaintyBounds& bounds,
                                   const Matrix& q, const Matrix& r,
                                   const std::vector<Vec>& p_grid);

/// Unmatched robust synthesis over the augmented plant
///   B~ = [B, alpha (I - B B+)],  Q~ = F_u + rho^2 H + beta^2 I,
///   R~ = blockdiag(I, rho^2 I),
/// with K2 = -B^T S and L per `formula`. When `enforce_hypothesis` is set,
/// beta^2 I - 2 rho^2 L^T L must be positive definite for the reported L
/// (HypothesisViolated otherwise). The grid decrease certificate
/// 2 x^T S (A(p) + B K2) x <= -x^T Q2 x uses the derived-formula Q2.
RobustSynthesis synthesize_unmatched(const UncertainPlant& plant, const UncertaintyBounds& bounds,
                                     LFormula formula, bool enforce_hypothesis,
                                     const std::vector<Vec>& p_grid);

/// Stability-hypothesis matrix beta^2 I - 2 rho^2 L^T L.
Matrix q2_matrix(const Matrix& l, double rho, double beta);

}  // namespace etrc
