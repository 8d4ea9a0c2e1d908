#pragma once

#include <optional>
#include <vector>

#include "etrc/matrix.hpp"

namespace etrc {

enum class UncertaintyKind { matched, unmatched };

/// Parameter trajectory p(t) used during simulation. Three shapes cover the
/// scenarios of interest: constant, per-component sinusoid, and
/// piecewise-linear interpolation over knot times.
struct PTrajectory {
  enum class Kind { constant, sinusoid, piecewise };

  Kind kind = Kind::constant;
  Vec value;                      ///< constant: p(t) = value
  Vec amplitude;                  ///< sinusoid: p_i(t) = amplitude_i * sin(frequency * t)
  double frequency = 1.0;
  std::vector<double> times;      ///< piecewise: knot times (strictly increasing)
  std::vector<Vec> values;        ///< piecewise: knot values (clamped outside)

  Vec operator()(double t) const;

  bool operator==(const PTrajectory&) const = default;
};

/// Linear plant with affine parametric uncertainty:
///   x' = A(p) x + B u,   A(p) = a_nominal + sum_i p_i * delta_coeffs[i],
/// with p confined to the box [p_min, p_max] and following p_trajectory(t)
/// during simulation.
struct UncertainPlant {
  Matrix a_nominal;                ///< A(p0), n x n
  Matrix b;                        ///< input matrix, n x m
  std::vector<Matrix> delta_coeffs;///< one n x n coefficient per parameter
  Vec p_min, p_max;                ///< parameter box
  PTrajectory p_trajectory;

  int n() const { return a_nominal.rows(); }
  int m() const { return b.cols(); }

  /// A(p) - A(p0) = sum_i p_i * delta_coeffs[i].
  Matrix delta_a(const Vec& p) const;
  /// A(p0) + delta_a(p).
  Matrix a_at(const Vec& p) const;
};

/// Uniform grid over the parameter box with the given per-dimension spacing;
/// box vertices are always included.
std::vector<Vec> make_p_grid(const UncertainPlant& plant, double step);

/// Matched-uncertainty test: true iff (I - B B+) delta_a(p) vanishes (to the
/// matched-residual tolerance) at every grid point. `b_pinv` is B+ so callers
/// can extract phi(p) = B+ delta_a(p) without refactoring it.
struct MatchedClassification {
  bool matched = false;
  Matrix b_pinv;
};
MatchedClassification classify_matched(const UncertainPlant& plant,
                                       const std::vector<Vec>& p_grid);

/// phi(p) = B+ delta_a(p) (meaningful when the plant is matched).
Matrix phi_of(const UncertainPlant& plant, const Vec& p);

/// Projector split of the uncertainty at a single parameter value:
/// matched_part = B B+ dA(p), unmatched_part = (I - B B+) dA(p). The parts
/// are certified to reconstruct dA(p).
struct Decomposition {
  Matrix matched_part;
  Matrix unmatched_part;
};
Decomposition decompose_unmatched(const UncertainPlant& plant, const Vec& p);

/// Scenario-supplied inputs to bound construction: any explicit bound
/// matrices plus the unmatched design scalars.
struct BoundParams {
  std::optional<Matrix> f_m;  ///< bound on phi^T R phi (matched)
  std::optional<Matrix> f;    ///< bound on dA^T dA
  std::optional<Matrix> f_u;  ///< bound on dA^T (B+)^T B+ dA (unmatched)
  std::optional<Matrix> h;    ///< bound on alpha^-2 dA^T dA (unmatched)
  double alpha = 1.0;
  double rho = 0.0;
  double beta = 0.0;
};

/// Conservative bound matrices certified on the parameter grid.
struct UncertaintyBounds {
  UncertaintyKind kind = UncertaintyKind::matched;
  Matrix f_m;  ///< matched case
  Matrix f;    ///< generic norm bound (both cases)
  Matrix f_u;  ///< unmatched case
  Matrix h;    ///< unmatched case
  double alpha = 1.0;
  double rho = 0.0;
  double beta = 0.0;
};

/// Build (or verify) the bound matrices: each is the supplied matrix when
/// given, otherwise the elementwise grid-supremum of the corresponding
/// quadratic form, symmetrized and inflated by 5%. Every returned bound is
/// re-verified against its defining inequality at each grid point; a
/// violated supplied bound raises VerificationFailed.
UncertaintyBounds bound_matrices(const UncertainPlant& plant, const BoundParams& params,
                                 const std::vector<Vec>& p_grid, const Matrix& r);

/// Q1 at one parameter value: (F_m - phi^T R phi) + Q + (K1 + phi)^T R (K1 + phi).
Matrix q1_at(const Matrix& k1, const Matrix& phi, const Matrix& r, const Matrix& q,
             const Matrix& f_m);

/// Worst-case Q1 over the grid (the point minimizing its smallest
/// eigenvalue). Raises NotPositiveDefinite when that eigenvalue is <= 0.
struct Q1Report {
  Matrix q1;
  double lambda_min = 0.0;
  Vec p_worst;
};
Q1Report q1_worst(const Matrix& k1, const UncertainPlant& plant, const Matrix& r,
                  const Matrix& q, const Matrix& f_m, const std::vector<Vec>& p_grid);

/// Trigger threshold mu = sigma * lambda_min(Q) / (2 ||S B K||).
/// Raises DegenerateThreshold when the denominator is numerically zero and
/// ValidationError when sigma is outside (0, 1).
double threshold_mu(const Matrix& s, const Matrix& b, const Matrix& k,
                    double lambda_min_q, double sigma);

/// Closed-loop Lipschitz constants over the uncertainty grid:
/// l1 = max_p ||A(p0) + dA(p) + B K||, l2 = ||B K||, l3 = l1 + l2.
struct LipschitzConstants {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
};
LipschitzConstants lipschitz_constants(const UncertainPlant& plant, const Matrix& k,
                                       const std::vector<Vec>& p_grid);

}  // namespace etrc
