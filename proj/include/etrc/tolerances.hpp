#pragma once

namespace etrc {

/// Central record of every numerical tolerance used by the library.
/// Keeping them in one place makes the certification thresholds auditable
/// and keeps unit tests and implementation in lockstep.
struct Tolerances {
  // -- linear algebra -------------------------------------------------------
  /// Jacobi sweep stop: off-diagonal Frobenius norm < this times ||m||_F.
  double jacobi_offdiag_rel = 1e-12;
  /// Symmetry gate: accept and symmetrize when ||m - m^T||_F <= this * (1 + ||m||_F).
  double symmetry_rel = 1e-9;
  /// Full-column-rank gate: smallest eigenvalue of B^T B must exceed this.
  double rank_min_eig = 1e-12;
  /// Pseudo-inverse self-check: ||B+ B - I|| must stay below this.
  double pinv_identity = 1e-10;

  // -- Riccati --------------------------------------------------------------
  /// Residual certificate: ||residual||_F <= this * (1 + ||S||_F^2).
  double care_residual_rel = 1e-8;
  /// Newton iteration stop: ||S_next - S||_F <= this * (1 + ||S||_F).
  double care_newton_step = 1e-13;
  /// PSD gate for Q weights: min eigenvalue >= -this * (1 + ||Q||_F).
  double weight_psd_rel = 1e-9;
  /// Grid decrease certification slack (matched): factor on -x^T x.
  double decrease_matched_slack = 1e-6;
  /// Grid decrease certification slack (unmatched): factor plus absolute term.
  double decrease_unmatched_slack = 1e-6;
  double decrease_unmatched_abs = 1e-9;

  // -- uncertainty ----------------------------------------------------------
  /// Matched classification: ||(I - B B+) dA(p)|| must stay below this.
  double matched_residual = 1e-9;
  /// Decomposition reconstruction: parts must sum back to dA within this.
  double decompose_recon = 1e-10;
  /// Bound verification: min eigenvalue of (bound - form) >= -this.
  double bound_psd = 1e-9;
  /// Grid-supremum bound inflation factor.
  double bound_inflation = 1.05;
  /// Threshold denominator guard (2 ||S B K||).
  double threshold_denominator = 1e-12;

  // -- triggering / simulation ----------------------------------------------
  /// Suppress static/dynamic firing when both ||x|| and ||e|| are below this.
  double origin_suppression = 1e-9;
  /// Periodic rule slack: fire when t - last >= period - this.
  double periodic_slack = 1e-12;
  /// Divergence guard on the state norm.
  double divergence_norm = 1e6;
  /// eta nonnegativity allowance in dynamic runs.
  double eta_floor = -1e-12;
  /// ISS decrease certificate tolerance: this times max |dV/dt|.
  double decrease_tol_rel = 1e-2;

  // -- inter-event-time bounds ----------------------------------------------
  /// Adaptive Simpson absolute tolerance for the dynamic bound integral.
  double simpson_abs = 1e-10;
};

/// Library-wide defaults. All modules read from this single instance.
inline constexpr Tolerances kTol{};

}  // namespace etrc
