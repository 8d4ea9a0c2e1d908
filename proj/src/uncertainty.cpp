#include "etrc/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "etrc/errors.hpp"
#include "etrc/linalg.hpp"
#include "etrc/tolerances.hpp"

namespace etrc {

Vec PTrajectory::operator()(double t) const {
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::sinusoid: {
      Vec p(amplitude.size());
      const double s = std::sin(frequency * t);
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = amplitude[i] * s;
      return p;
    }
    case Kind::piecewise: {
      if (times.empty()) return {};
      if (t <= times.front()) return values.front();
      if (t >= times.back()) return values.back();
      std::size_t hi = 1;
      while (times[hi] < t) ++hi;
      const double w = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
      Vec p(values[hi].size());
      for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = (1.0 - w) * values[hi - 1][i] + w * values[hi][i];
      return p;
    }
  }
  return {};
}

Matrix UncertainPlant::delta_a(const Vec& p) const {
  Matrix d(n(), n());
  if (p.size() != delta_coeffs.size())
    throw Error(ErrorCategory::ValidationError,
                "delta_a: parameter dimension " + std::to_string(p.size()) +
                    " does not match coefficient count " + std::to_string(delta_coeffs.size()));
  for (std::size_t i = 0; i < p.size(); ++i) d += p[i] * delta_coeffs[i];
  return d;
}

Matrix UncertainPlant::a_at(const Vec& p) const { return a_nominal + delta_a(p); }

std::vector<Vec> make_p_grid(const UncertainPlant& plant, double step) {
  if (step <= 0.0)
    throw Error(ErrorCategory::ValidationError, "make_p_grid: step must be positive");
  // Per-dimension samples; the upper vertex is appended explicitly so box
  // corners are always part of the grid.
  std::vector<std::vector<double>> axes;
  for (std::size_t d = 0; d < plant.p_min.size(); ++d) {
    std::vector<double> axis;
    const double lo = plant.p_min[d], hi = plant.p_max[d];
    for (double v = lo; v < hi - 1e-12; v += step) axis.push_back(v);
    axis.push_back(hi);
    axes.push_back(std::move(axis));
  }
  std::vector<Vec> grid;
  Vec point(axes.size());
  // Depth-first cartesian product in fixed axis order (deterministic).
  const auto emit = [&](auto&& self, std::size_t d) -> void {
    if (d == axes.size()) {
      grid.push_back(point);
      return;
    }
    for (double v : axes[d]) {
      point[d] = v;
      self(self, d + 1);
    }
  };
  emit(emit, 0);
  return grid;
}

MatchedClassification classify_matched(const UncertainPlant& plant,
                                       const std::vector<Vec>& p_grid) {
  MatchedClassification out;
  out.b_pinv = pseudo_inverse(plant.b);
  const Matrix p_perp = Matrix::identity(plant.n()) - plant.b * out.b_pinv;
  out.matched = true;
  for (const Vec& p : p_grid) {
    if (spectral_norm(p_perp * plant.delta_a(p)) > kTol.matched_residual) {
      out.matched = false;
      break;
    }
  }
  return out;
}

Matrix phi_of(const UncertainPlant& plant, const Vec& p) {
  return pseudo_inverse(plant.b) * plant.delta_a(p);
}

Decomposition decompose_unmatched(const UncertainPlant& plant, const Vec& p) {
  const Matrix b_pinv = pseudo_inverse(plant.b);
  const Matrix da = plant.delta_a(p);
  Decomposition out;
  out.matched_part = plant.b * (b_pinv * da);
  out.unmatched_part = da - out.matched_part;
  if (max_abs_diff(out.matched_part + out.unmatched_part, da) > kTol.decompose_recon)
    throw Error(ErrorCategory::ValidationError, "decompose_unmatched: reconstruction failed");
  return out;
}

namespace {

/// Quadratic-form family evaluated on the grid, with either verification of
/// a supplied bound or the elementwise-supremum construction.
Matrix bound_or_construct(const std::optional<Matrix>& supplied,
                          const std::vector<Vec>& p_grid,
                          const std::function<Matrix(const Vec&)>& form, int n,
                          const char* name) {
  if (supplied) {
    for (const Vec& p : p_grid) {
      const Matrix gap = *supplied - form(p);
      if (sym_eigenvalues(symmetrize(gap)).front() < -kTol.bound_psd)
        throw Error(ErrorCategory::VerificationFailed,
                    std::string(name) + " violated at a grid point");
    }
    return *supplied;
  }
  Matrix sup(n, n);
  bool first = true;
  for (const Vec& p : p_grid) {
    const Matrix m = form(p);
    if (first) {
      sup = m;
      first = false;
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sup(i, j) = std::max(sup(i, j), m(i, j));
    }
  }
  Matrix bound = kTol.bound_inflation * symmetrize(sup);
  // The constructed bound must itself satisfy the defining inequality.
  for (const Vec& p : p_grid) {
    const Matrix gap = bound - form(p);
    if (sym_eigenvalues(symmetrize(gap)).front() < -kTol.bound_psd)
      throw Error(ErrorCategory::VerificationFailed,
                  std::string(name) + ": constructed bound fails on the grid");
  }
  return bound;
}

}  // namespace

UncertaintyBounds bound_matrices(const UncertainPlant& plant, const BoundParams& params,
                                 const std::vector<Vec>& p_grid, const Matrix& r) {
  if (p_grid.empty())
    throw Error(ErrorCategory::ValidationError, "bound_matrices: empty parameter grid");
  UncertaintyBounds out;
  out.alpha = params.alpha;
  out.rho = params.rho;
  out.beta = params.beta;
  const int n = plant.n();
  const MatchedClassification cls = classify_matched(plant, p_grid);
  out.kind = cls.matched ? UncertaintyKind::matched : UncertaintyKind::unmatched;

  // Generic norm bound dA^T dA <= F (kept for both kinds).
  out.f = bound_or_construct(
      params.f, p_grid,
      [&](const Vec& p) {
        const Matrix da = plant.delta_a(p);
        return da.transpose() * da;
      },
      n, "F");

  if (cls.matched) {
    // phi^T R phi <= F_m.
    out.f_m = bound_or_construct(
        params.f_m, p_grid,
        [&](const Vec& p) {
          const Matrix phi = cls.b_pinv * plant.delta_a(p);
          return phi.transpose() * (r * phi);
        },
        n, "F_m");
  } else {
    if (params.alpha <= 0.0)
      throw Error(ErrorCategory::ValidationError, "bound_matrices: alpha must be positive");
    // Matched-component bound dA^T (B+)^T B+ dA <= F_u.
    out.f_u = bound_or_construct(
        params.f_u, p_grid,
        [&](const Vec& p) {
          const Matrix m = cls.b_pinv * plant.delta_a(p);
          return m.transpose() * m;
        },
        n, "F_u");
    // Norm bound alpha^-2 dA^T dA <= H.
    const double inv_a2 = 1.0 / (params.alpha * params.alpha);
    out.h = bound_or_construct(
        params.h, p_grid,
        [&](const Vec& p) {
          const Matrix da = plant.delta_a(p);
          return inv_a2 * (da.transpose() * da);
        },
        n, "H");
  }
  return out;
}

Matrix q1_at(const Matrix& k1, const Matrix& phi, const Matrix& r, const Matrix& q,
             const Matrix& f_m) {
  const Matrix kp = k1 + phi;
  return (f_m - phi.transpose() * (r * phi)) + q + kp.transpose() * (r * kp);
}

Q1Report q1_worst(const Matrix& k1, const UncertainPlant& plant, const Matrix& r,
                  const Matrix& q, const Matrix& f_m, const std::vector<Vec>& p_grid) {
  if (p_grid.empty())
    throw Error(ErrorCategory::ValidationError, "q1_worst: empty parameter grid");
  const Matrix b_pinv = pseudo_inverse(plant.b);
  Q1Report report;
  bool first = true;
  for (const Vec& p : p_grid) {
    const Matrix phi = b_pinv * plant.delta_a(p);
    const Matrix q1 = q1_at(k1, phi, r, q, f_m);
    const double lmin = sym_eigenvalues(symmetrize(q1)).front();
    if (first || lmin < report.lambda_min) {
      report.q1 = q1;
      report.lambda_min = lmin;
      report.p_worst = p;
      first = false;
    }
  }
  if (report.lambda_min <= 0.0)
    throw Error(ErrorCategory::NotPositiveDefinite,
                "q1_worst: lambda_min = " + std::to_string(report.lambda_min));
  return report;
}

double threshold_mu(const Matrix& s, const Matrix& b, const Matrix& k,
                    double lambda_min_q, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw Error(ErrorCategory::ValidationError,
                "threshold_mu: sigma must lie in (0, 1), got " + std::to_string(sigma));
  const double denom = 2.0 * spectral_norm(s * (b * k));
  if (denom < kTol.threshold_denominator)
    throw Error(ErrorCategory::DegenerateThreshold,
                "threshold_mu: 2||S B K|| = " + std::to_string(denom));
  return sigma * lambda_min_q / denom;
}

LipschitzConstants lipschitz_constants(const UncertainPlant& plant, const Matrix& k,
                                       const std::vector<Vec>& p_grid) {
  LipschitzConstants out;
  const Matrix bk = plant.b * k;
  out.l2 = spectral_norm(bk);
  for (const Vec& p : p_grid)
    out.l1 = std::max(out.l1, spectral_norm(plant.a_at(p) + bk));
  out.l3 = out.l1 + out.l2;
  return out;
}

}  // namespace etrc
