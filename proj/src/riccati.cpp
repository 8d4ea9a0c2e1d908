#include "etrc/riccati.hpp"

#include <cmath>
#include <random>
#include <string>

#include "etrc/errors.hpp"
#include "etrc/linalg.hpp"
#include "etrc/tolerances.hpp"

namespace etrc {

namespace {

/// R^-1 M via LU (R is small and PD).
Matrix r_inv_times(const Matrix& r, const Matrix& m) { return lu_solve(r, m); }

/// Gain from a Riccati iterate: K = -R^-1 B^T S.
Matrix gain_from(const Matrix& b, const Matrix& r, const Matrix& s) {
  return -r_inv_times(r, b.transpose() * s);
}

/// Find a stabilizing initial gain. Pole-pushing first (K0 = -c B^T with
/// growing c), then the eigenvalue-shift construction
///   (A + beta I) W + W (A + beta I)^T = 2 B B^T,  K0 = -B^T W^-1,
/// which stabilizes any controllable pair for beta > ||A||_F.
Matrix stabilizing_init(const Matrix& a, const Matrix& b) {
  const int n = a.rows();
  const Matrix zero_gain(b.cols(), n);
  if (spectral_abscissa(a) < 0.0) return zero_gain;

  double c = 1.0;
  for (int attempt = 0; attempt < 21; ++attempt, c *= 2.0) {
    const Matrix k0 = -c * b.transpose();
    if (spectral_abscissa(a + b * k0) < 0.0) return k0;
  }

  Matrix shifted = a;
  const double beta = frobenius_norm(a) + 1.0;
  for (int i = 0; i < n; ++i) shifted(i, i) += beta;
  try {
    const Matrix w = symmetrize(solve_lyapunov(shifted, -2.0 * (b * b.transpose())));
    const Matrix k0 = -(b.transpose() * lu_solve(w, Matrix::identity(n)));
    if (spectral_abscissa(a + b * k0) < 0.0) return k0;
  } catch (const Error&) {
    // fall through to the failure below
  }
  throw Error(ErrorCategory::NotStabilizable, "no stabilizing initial gain found");
}

}  // namespace

double care_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                     const Matrix& s) {
  const Matrix res =
      s * a + a.transpose() * s + q - s * (b * r_inv_times(r, b.transpose() * s));
  return frobenius_norm(res);
}

Matrix solve_care(const Matrix& a, const Matrix& b_eff, const Matrix& q_eff,
                  const Matrix& r_eff, const std::optional<Matrix>& k0_init) {
  const int n = a.rows();
  if (b_eff.rows() != n || q_eff.rows() != n || q_eff.cols() != n ||
      r_eff.rows() != b_eff.cols() || r_eff.cols() != b_eff.cols())
    throw Error(ErrorCategory::InvalidMatrix, "solve_care: inconsistent shapes");
  // Weight admissibility: Q symmetric PSD, R symmetric PD.
  const Matrix q = symmetrize(q_eff);
  if (frobenius_norm(q_eff - q_eff.transpose()) >
          kTol.symmetry_rel * (1.0 + frobenius_norm(q_eff)) ||
      sym_eigenvalues(q).front() < -kTol.weight_psd_rel * (1.0 + frobenius_norm(q)))
    throw Error(ErrorCategory::IndefiniteWeights, "solve_care: Q must be symmetric PSD");
  if (!is_positive_definite(r_eff, 0.0))
    throw Error(ErrorCategory::IndefiniteWeights, "solve_care: R must be symmetric PD");

  Matrix k = k0_init ? *k0_init : stabilizing_init(a, b_eff);
  if (k0_init && spectral_abscissa(a + b_eff * k) >= 0.0)
    throw Error(ErrorCategory::NotStabilizable, "solve_care: supplied initial gain not stabilizing");

  // Newton–Kleinman: S_i solves the Lyapunov equation of the current closed
  // loop; the gain update is quadratically convergent from any stabilizing K.
  Matrix s(n, n);
  bool have_s = false;
  for (int it = 0; it < 100; ++it) {
    const Matrix acl = a + b_eff * k;
    const Matrix w = symmetrize(q + k.transpose() * (r_eff * k));
    const Matrix s_next = symmetrize(solve_lyapunov(acl.transpose(), w));
    const double step = frobenius_norm(have_s ? s_next - s : s_next);
    s = s_next;
    have_s = true;
    k = gain_from(b_eff, r_eff, s);
    if (step <= kTol.care_newton_step * (1.0 + frobenius_norm(s))) break;
  }

  // Certification: residual bound and a stable implied closed loop.
  const double res = care_residual(a, b_eff, q, r_eff, s);
  const double s_norm = frobenius_norm(s);
  if (!(res <= kTol.care_residual_rel * (1.0 + s_norm * s_norm)))
    throw Error(ErrorCategory::NotStabilizable,
                "solve_care: residual " + std::to_string(res) + " fails certification");
  if (spectral_abscissa(a + b_eff * gain_from(b_eff, r_eff, s)) >= 0.0)
    throw Error(ErrorCategory::NotStabilizable, "solve_care: implied closed loop not stable");
  return s;
}

namespace {

/// Randomized grid certification of the pointwise decrease inequality
/// 2 x^T S (A(p) + B K) x <= rhs(x, p). Deterministic seed so repeated
/// syntheses behave identically.
template <typename Rhs>
void certify_decrease(const UncertainPlant& plant, const Matrix& s, const Matrix& bk,
                      const std::vector<Vec>& p_grid, const Rhs& rhs, const char* what) {
  std::mt19937 rng(0x5eed0u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = plant.n();
  std::vector<Vec> states(100, Vec(static_cast<std::size_t>(n)));
  for (auto& x : states)
    for (double& xi : x) xi = gauss(rng);

  for (const Vec& p : p_grid) {
    const Matrix acl = plant.a_at(p) + bk;
    const Matrix form = s * acl;  // V' along the loop: 2 x^T S A_cl x
    for (const Vec& x : states) {
      const double lhs = 2.0 * dot(x, mat_vec(form, x));
      if (!(lhs <= rhs(x)))
        throw Error(ErrorCategory::RobustnessCheckFailed,
                    std::string(what) + ": decrease inequality fails on the grid");
    }
  }
}

}  // namespace

RobustSynthesis synthesize_matched(const UncertainPlant& plant, const UncertaintyBounds& bounds,
                                   const Matrix& q, const Matrix& r,
                                   const std::vector<Vec>& p_grid) {
  if (bounds.kind != UncertaintyKind::matched)
    throw Error(ErrorCategory::ValidationError, "synthesize_matched: bounds are not matched");
  RobustSynthesis syn;
  syn.kind = UncertaintyKind::matched;
  const Matrix q_eff = symmetrize(q + bounds.f_m);
  syn.s = solve_care(plant.a_nominal, plant.b, q_eff, r);
  syn.k = gain_from(plant.b, r, syn.s);
  syn.residual = care_residual(plant.a_nominal, plant.b, q_eff, r, syn.s);
  syn.closed_loop_spectral_abscissa = spectral_abscissa(plant.a_nominal + plant.b * syn.k);

  certify_decrease(
      plant, syn.s, plant.b * syn.k, p_grid,
      [&](const Vec& x) { return -dot(x, x) * (1.0 - kTol.decrease_matched_slack); },
      "synthesize_matched");
  return syn;
}

Matrix q2_matrix(const Matrix& l, double rho, double beta) {
  return beta * beta * Matrix::identity(l.cols()) - 2.0 * rho * rho * (l.transpose() * l);
}

RobustSynthesis synthesize_unmatched(const UncertainPlant& plant, const UncertaintyBounds& bounds,
                                     LFormula formula, bool enforce_hypothesis,
                                     const std::vector<Vec>& p_grid) {
  if (bounds.kind != UncertaintyKind::unmatched)
    throw Error(ErrorCategory::ValidationError, "synthesize_unmatched: bounds are not unmatched");
  const double alpha = bounds.alpha, rho = bounds.rho, beta = bounds.beta;
  if (rho <= 0.0 || beta <= 0.0 || alpha <= 0.0)
    throw Error(ErrorCategory::ValidationError,
                "synthesize_unmatched: alpha, rho, beta must be positive");
  const int n = plant.n();

  const Matrix b_pinv = pseudo_inverse(plant.b);
  const Matrix p_perp = Matrix::identity(n) - plant.b * b_pinv;
  const Matrix b_tilde = hcat(plant.b, alpha * p_perp);
  const Matrix q_tilde =
      symmetrize(bounds.f_u + rho * rho * bounds.h + beta * beta * Matrix::identity(n));
  const Matrix r_tilde =
      block_diag(Matrix::identity(plant.m()), rho * rho * Matrix::identity(n));

  RobustSynthesis syn;
  syn.kind = UncertaintyKind::unmatched;
  syn.s = solve_care(plant.a_nominal, b_tilde, q_tilde, r_tilde);
  syn.k = -(plant.b.transpose() * syn.s);
  syn.l_derived = -(alpha / (rho * rho)) * (p_perp * syn.s);
  syn.l = formula == LFormula::derived ? syn.l_derived
                                       : -(alpha * rho * rho) * (p_perp * syn.s);
  syn.residual = care_residual(plant.a_nominal, b_tilde, q_tilde, r_tilde, syn.s);
  // The design loop the Riccati equation stabilizes uses the derived L.
  syn.closed_loop_spectral_abscissa =
      spectral_abscissa(plant.a_nominal + plant.b * syn.k + alpha * (p_perp * syn.l_derived));

  if (enforce_hypothesis) {
    const Matrix q2 = q2_matrix(syn.l, rho, beta);
    if (!is_positive_definite(q2, 0.0)) {
      const double lmin = sym_eigenvalues(symmetrize(q2)).front();
      throw Error(ErrorCategory::HypothesisViolated,
                  "synthesize_unmatched: beta^2 I - 2 rho^2 L^T L has min eigenvalue " +
                      std::to_string(lmin));
    }
  }

  const Matrix q2_cert = q2_matrix(syn.l_derived, rho, beta);
  certify_decrease(
      plant, syn.s, plant.b * syn.k, p_grid,
      [&](const Vec& x) {
        return -quad_form(x, q2_cert) * (1.0 + kTol.decrease_unmatched_slack) +
               kTol.decrease_unmatched_abs;
      },
      "synthesize_unmatched");
  return syn;
}

}  // namespace etrc
