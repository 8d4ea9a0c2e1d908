#include <cmath>
#include <random>

#include "doctest.h"
#include "etrc/errors.hpp"
#include "etrc/linalg.hpp"
#include "etrc/uncertainty.hpp"

using namespace etrc;

namespace {

/// Double integrator-like plant whose uncertainty enters through the input
/// channel: dA(p) = p * [[0,0],[1,1]] with B = [0;1].
UncertainPlant channel_plant() {
  UncertainPlant plant;
  plant.a_nominal = Matrix{{0, 1}, {1, 0}};
  plant.b = Matrix::column({0.0, 1.0});
  plant.delta_coeffs = {Matrix{{0, 0}, {1, 1}}};
  plant.p_min = {-2.0};
  plant.p_max = {2.0};
  plant.p_trajectory.kind = PTrajectory::Kind::sinusoid;
  plant.p_trajectory.amplitude = {2.0};
  return plant;
}

/// Same nominal plant, but the uncertainty dA(p) = p * [[0,1],[0,0]] acts on
/// the first state equation, outside the input channel.
UncertainPlant cross_plant() {
  UncertainPlant plant = channel_plant();
  plant.delta_coeffs = {Matrix{{0, 1}, {0, 0}}};
  return plant;
}

}  // namespace

TEST_SUITE("uncertainty") {

TEST_CASE("parameter trajectories evaluate as specified") {
  PTrajectory constant;
  constant.kind = PTrajectory::Kind::constant;
  constant.value = {1.5};
  CHECK(constant(17.0)[0] == doctest::Approx(1.5));

  PTrajectory sinus;
  sinus.kind = PTrajectory::Kind::sinusoid;
  sinus.amplitude = {2.0};
  sinus.frequency = 1.0;
  CHECK(sinus(0.0)[0] == doctest::Approx(0.0));
  CHECK(sinus(std::asin(1.0))[0] == doctest::Approx(2.0));

  PTrajectory pw;
  pw.kind = PTrajectory::Kind::piecewise;
  pw.times = {0.0, 1.0, 2.0};
  pw.values = {{0.0}, {1.0}, {0.0}};
  CHECK(pw(0.5)[0] == doctest::Approx(0.5));
  CHECK(pw(-1.0)[0] == doctest::Approx(0.0));  // clamped left
  CHECK(pw(3.0)[0] == doctest::Approx(0.0));   // clamped right
}

TEST_CASE("parameter grid covers the box including both endpoints") {
  const std::vector<Vec> grid = make_p_grid(channel_plant(), 0.01);
  REQUIRE(grid.size() == 401);
  CHECK(grid.front()[0] == doctest::Approx(-2.0));
  CHECK(grid.back()[0] == doctest::Approx(2.0));

  // A parameter-free plant still has the single empty grid point.
  UncertainPlant certain = channel_plant();
  certain.delta_coeffs.clear();
  certain.p_min.clear();
  certain.p_max.clear();
  const std::vector<Vec> empty_grid = make_p_grid(certain, 0.01);
  REQUIRE(empty_grid.size() == 1);
  CHECK(empty_grid[0].empty());
}

TEST_CASE("input-channel uncertainty classifies as matched with phi = B+ dA") {
  const UncertainPlant plant = channel_plant();
  const std::vector<Vec> grid = make_p_grid(plant, 0.01);
  const MatchedClassification cls = classify_matched(plant, grid);
  CHECK(cls.matched);
  const Matrix phi = phi_of(plant, {2.0});
  REQUIRE(phi.rows() == 1);
  CHECK(phi(0, 0) == doctest::Approx(2.0));
  CHECK(phi(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("cross-channel uncertainty classifies as unmatched") {
  const UncertainPlant plant = cross_plant();
  CHECK_FALSE(classify_matched(plant, make_p_grid(plant, 0.01)).matched);
}

TEST_CASE("vanishing uncertainty classifies as matched") {
  UncertainPlant plant = channel_plant();
  plant.delta_coeffs = {Matrix::zeros(2, 2)};
  CHECK(classify_matched(plant, make_p_grid(plant, 0.01)).matched);
}

TEST_CASE("projector decomposition splits and reconstructs the uncertainty") {
  const UncertainPlant plant = cross_plant();
  const Decomposition dec = decompose_unmatched(plant, {2.0});
  // B = [0;1] projects onto the second state equation, so the cross-channel
  // term is entirely unmatched.
  CHECK(max_abs_diff(dec.matched_part, Matrix::zeros(2, 2)) < 1e-12);
  CHECK(max_abs_diff(dec.unmatched_part, Matrix{{0, 2}, {0, 0}}) < 1e-12);

  const Decomposition ch = decompose_unmatched(channel_plant(), {2.0});
  CHECK(max_abs_diff(ch.matched_part, Matrix{{0, 0}, {2, 2}}) < 1e-12);
  CHECK(max_abs_diff(ch.unmatched_part, Matrix::zeros(2, 2)) < 1e-12);
}

TEST_CASE("supplied bound matrices are verified on the grid") {
  const UncertainPlant plant = channel_plant();
  const std::vector<Vec> grid = make_p_grid(plant, 0.01);
  const Matrix r{{2.0}};

  BoundParams params;
  params.f_m = Matrix{{8, 8}, {8, 8}};
  const UncertaintyBounds bounds = bound_matrices(plant, params, grid, r);
  CHECK(bounds.kind == UncertaintyKind::matched);
  CHECK(max_abs_diff(bounds.f_m, *params.f_m) < 1e-12);

  // phi^T R phi reaches 2 p^2 * ones at |p| = 2; anything below 8 fails.
  BoundParams bad = params;
  bad.f_m = Matrix{{7.9, 0}, {0, 7.9}};
  CHECK_THROWS_AS(bound_matrices(plant, bad, grid, r), Error);
}

TEST_CASE("a supplied norm bound below the grid supremum is rejected") {
  const UncertainPlant plant = cross_plant();
  const std::vector<Vec> grid = make_p_grid(plant, 0.01);
  BoundParams params;
  params.alpha = 1.0;
  params.h = Matrix{{4, 4}, {4, 4}};  // indefinite against dA^T dA at |p| = 2
  CHECK_THROWS_AS(bound_matrices(plant, params, grid, Matrix::identity(1)), Error);
}

TEST_CASE("missing bounds are constructed from the inflated grid supremum") {
  const UncertainPlant plant = cross_plant();
  const std::vector<Vec> grid = make_p_grid(plant, 0.01);
  BoundParams params;
  params.alpha = 1.0;
  const UncertaintyBounds bounds = bound_matrices(plant, params, grid, Matrix::identity(1));
  CHECK(bounds.kind == UncertaintyKind::unmatched);
  // dA^T dA = diag(0, p^2) peaks at 4; the constructed bound inflates by 5%.
  CHECK(bounds.h(0, 0) == doctest::Approx(0.0));
  CHECK(bounds.h(1, 1) == doctest::Approx(4.2).epsilon(1e-9));
  CHECK(bounds.h(0, 1) == doctest::Approx(0.0));
  // (B+ dA) vanishes here, so the matched-component bound is zero.
  CHECK(max_abs_diff(bounds.f_u, Matrix::zeros(2, 2)) < 1e-12);
}

TEST_CASE("worst-case state weight over the grid keeps its floor eigenvalue") {
  const UncertainPlant plant = channel_plant();
  const std::vector<Vec> grid = make_p_grid(plant, 0.01);
  const Matrix q = 10.0 * Matrix::identity(2);
  const Matrix r{{2.0}};
  const Matrix f_m{{8, 8}, {8, 8}};
  const double g = -(1.0 + std::sqrt(10.0));  // -R^-1 B^T S row value
  const Matrix k1{{g, g}};

  const Q1Report report = q1_worst(k1, plant, r, q, f_m, grid);
  CHECK(std::abs(report.lambda_min - 10.0) <= 1e-6);
  REQUIRE(report.p_worst.size() == 1);

  // Spot-check one parameter value directly.
  const Matrix q1 = q1_at(k1, phi_of(plant, {2.0}), r, q, f_m);
  CHECK(sym_eigenvalues(q1).front() == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("trigger threshold value, monotonicity, and guards") {
  // Values from the channel plant's synthesized design.
  const Matrix s{{18.3245553203368, 8.32455532033676}, {8.32455532033676, 8.32455532033676}};
  const Matrix b = Matrix::column({0.0, 1.0});
  const Matrix k{{-4.16227766016838, -4.16227766016838}};

  const double mu = threshold_mu(s, b, k, 10.0, 0.98);
  CHECK(mu == doctest::Approx(0.0707088856).epsilon(1e-8));

  const double mu_low = threshold_mu(s, b, k, 10.0, 0.5);
  const double mu_mid = threshold_mu(s, b, k, 10.0, 0.7);
  CHECK(mu_low < mu_mid);
  CHECK(mu_mid < mu);

  CHECK_THROWS_AS(threshold_mu(s, b, k, 10.0, 0.0), Error);
  CHECK_THROWS_AS(threshold_mu(s, b, k, 10.0, 1.0), Error);
  CHECK_THROWS_AS(threshold_mu(s, b, Matrix::zeros(1, 2), 10.0, 0.98), Error);
}

TEST_CASE("lipschitz constants dominate every interior sample") {
  const UncertainPlant plant = channel_plant();
  const std::vector<Vec> grid = make_p_grid(plant, 0.01);
  const Matrix k{{-4.16227766016838, -4.16227766016838}};
  const LipschitzConstants lip = lipschitz_constants(plant, k, grid);

  CHECK(lip.l1 == doctest::Approx(8.0755271).epsilon(1e-6));
  // ||B K|| = ||K|| for a unit column.
  CHECK(lip.l2 == doctest::Approx((1.0 + std::sqrt(10.0)) * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(lip.l3 == doctest::Approx(lip.l1 + lip.l2));

  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec p = {dist(rng)};
    const double norm = spectral_norm(plant.a_at(p) + plant.b * k);
    CHECK(norm <= lip.l1 + 1e-9);
  }
}

}  // TEST_SUITE
