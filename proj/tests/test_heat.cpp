#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <nsbesov/besov.hpp>
#include <nsbesov/chemin_lerner.hpp>
#include <nsbesov/generators.hpp>
#include <nsbesov/heat.hpp>
#include <nsbesov/ops.hpp>

using namespace nsbesov;

TEST_CASE("heat_propagate applies the exact per-mode decay") {
  Grid g = make_grid(2, 64, 1.0);
  SpectralField f(g, 2);
  f.add_real_mode(0, {3, 1, 0}, cplx{0.5, 0.25});
  f.add_real_mode(1, {3, 1, 0}, cplx{-0.1, 0.0});

  const double t = 0.1;
  SpectralField ft = heat_propagate(f, t);
  const double factor = std::exp(-10.0 * t);  // |xi|^2 = 9 + 1
  std::size_t idx = g.index({3, 1, 0});
  CHECK(ft.coef[0][idx].real() == Catch::Approx(0.5 * factor).epsilon(1e-14));
  CHECK(ft.coef[0][idx].imag() == Catch::Approx(0.25 * factor).epsilon(1e-14));
  CHECK(ft.coef[1][idx].real() == Catch::Approx(-0.1 * factor).epsilon(1e-14));

  SECTION("t = 0 is the identity, negative t rejected") {
    SpectralField f0 = heat_propagate(f, 0.0);
    REQUIRE(f0.coef[0][idx] == f.coef[0][idx]);
    CHECK_THROWS_AS(heat_propagate(f, -0.01), std::invalid_argument);
  }

  SECTION("semigroup composition") {
    SpectralField ab = heat_propagate(heat_propagate(f, 0.07), 0.03);
    SpectralField once = heat_propagate(f, 0.1);
    SpectralField diff = ab - once;
    CHECK(l2_norm_spectral(diff) < 1e-14 * l2_norm_spectral(once));
  }

  SECTION("box length enters through xi = k / L") {
    Grid g2 = make_grid(2, 64, 2.0);
    SpectralField h(g2, 2);
    h.add_real_mode(0, {3, 1, 0}, cplx{1.0, 0.0});
    SpectralField ht = heat_propagate(h, t);
    CHECK(ht.coef[0][g2.index({3, 1, 0})].real() ==
          Catch::Approx(std::exp(-10.0 / 4.0 * t)).epsilon(1e-14));
  }
}

TEST_CASE("free trajectory samples the semigroup on a uniform grid") {
  Grid g = make_grid(2, 32, 1.0);
  SpectralField u0 = taylor_green(g, 1.0);
  Trajectory traj = make_free_trajectory(u0, 0.5, 8);
  REQUIRE(traj.node_count() == 9);
  CHECK(traj.dt() == Catch::Approx(0.0625));
  for (int i = 0; i <= 8; ++i) {
    SpectralField diff = traj.nodes[static_cast<std::size_t>(i)] -
                         heat_propagate(u0, 0.5 * i / 8.0);
    REQUIRE(l2_norm_spectral(diff) == 0.0);
  }
  CHECK_THROWS_AS(make_free_trajectory(u0, -1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(make_free_trajectory(u0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("solve_heat: zero forcing reproduces the free flow") {
  Grid g = make_grid(2, 32, 1.0);
  SpectralField u0 = gen_divfree_random(42, -2.0, g);
  const double T = 0.25;
  const int M = 16;
  Trajectory forcing;
  forcing.grid = g;
  forcing.horizon = T;
  for (int i = 0; i <= M; ++i) forcing.nodes.push_back(zero_field(g, 2));
  Trajectory sol = solve_heat(u0, std::move(forcing));
  Trajectory free_traj = make_free_trajectory(u0, T, M);
  const double scale = l2_norm_spectral(u0);
  for (int i = 0; i <= M; ++i) {
    SpectralField diff =
        sol.nodes[static_cast<std::size_t>(i)] - free_traj.nodes[static_cast<std::size_t>(i)];
    REQUIRE(l2_norm_spectral(diff) < 1e-12 * scale);
  }
}

TEST_CASE("solve_heat converges at second order on a manufactured solution") {
  // u(t) = e^{-t} f solves u_t - Lap u = -e^{-t} (f + Lap f). The datum is
  // band-limited (blocks <= 1) so every mode sits in the quadrature's
  // asymptotic regime at the coarsest step.
  Grid g = make_grid(2, 32, 1.0);
  DyadicPartition part = build_partition(g);
  SpectralField f = low_cut(gen_divfree_random(7, -2.0, g), part, 2);
  SpectralField fp = f + laplacian(f);
  const double T = 0.5;

  auto final_error = [&](int M) {
    Trajectory forcing;
    forcing.grid = g;
    forcing.horizon = T;
    for (int i = 0; i <= M; ++i)
      forcing.nodes.push_back(-std::exp(-T * i / M) * fp);
    Trajectory sol = solve_heat(f, std::move(forcing));
    SpectralField diff = sol.nodes.back() - std::exp(-T) * f;
    return l2_norm_spectral(diff) / l2_norm_spectral(f);
  };

  const double e32 = final_error(32);
  const double e64 = final_error(64);
  const double e128 = final_error(128);
  CHECK(e32 < 1e-3);
  CHECK(e32 / e64 == Catch::Approx(4.0).margin(0.5));
  CHECK(e64 / e128 == Catch::Approx(4.0).margin(0.5));
}

TEST_CASE("Duhamel bilinear term: zero start, solenoidal, self-refining") {
  // Band-limited random datum: the bilinear image is genuinely nonzero
  // (Taylor-Green would be annihilated exactly) and mildly stiff.
  Grid g = make_grid(2, 32, 1.0);
  DyadicPartition part = build_partition(g);
  SpectralField u0 = low_cut(gen_divfree_random(11, -2.0, g), part, 2);
  normalize_l2(u0, 1.0);
  const double T = 0.25;

  auto duhamel_at = [&](int M) {
    Trajectory free_traj = make_free_trajectory(u0, T, M);
    return duhamel_bilinear(free_traj, free_traj);
  };

  Trajectory b = duhamel_at(64);
  REQUIRE(l2_norm_spectral(b.nodes.front()) == 0.0);
  double scale = l2_norm_spectral(b.nodes.back());
  REQUIRE(scale > 0.0);
  for (const SpectralField& node : b.nodes) {
    REQUIRE(divergence_defect(node) < 1e-12 * (l2_norm_spectral(node) + 1e-300));
  }

  SECTION("refinement by 4 moves the endpoint by O(dt^2)") {
    Trajectory fine = duhamel_at(256);
    SpectralField diff = b.nodes.back() - fine.nodes.back();
    CHECK(l2_norm_spectral(diff) < 1e-3 * scale);
  }

  SECTION("mismatched trajectories are rejected") {
    Trajectory f32 = make_free_trajectory(u0, T, 32);
    Trajectory f16 = make_free_trajectory(u0, T, 16);
    CHECK_THROWS_AS(duhamel_bilinear(f32, f16), std::invalid_argument);
  }
}

TEST_CASE("free-flow solution norm matches the closed form on one annulus") {
  // The profile lives on the single shell |xi|^2 = 2 inside annulus j = 0, so
  // every dyadic weight is 1 and the block norm decays as exactly e^{-2t}.
  Grid g = make_grid(2, 64, 1.0);
  SpectralField u0 = taylor_green(g, 1.0);
  DyadicPartition part = build_partition(g);
  BesovSpec spec = critical_spec(2, 2.0, 2.0);
  const double B0 = l2_norm_spectral(u0);
  const double T = 0.5;

  const double A = free_evolution_A_norm(u0, T, spec, 2000, part);
  const double l2_part = B0 * std::sqrt((1.0 - std::exp(-4.0 * T)) / 4.0);
  const double l1_part = B0 * (1.0 - std::exp(-2.0 * T)) / 2.0;
  CHECK(A == Catch::Approx(std::max(l2_part, l1_part)).epsilon(1e-6));

  SECTION("monotone in the horizon") {
    const double A1 = free_evolution_A_norm(u0, 0.125, spec, 256, part);
    const double A2 = free_evolution_A_norm(u0, 0.25, spec, 256, part);
    const double A3 = free_evolution_A_norm(u0, 0.5, spec, 256, part);
    CHECK(A1 < A2);
    CHECK(A2 < A3);
  }

  SECTION("partition-supplying overload agrees with the default") {
    CHECK(free_evolution_A_norm(u0, T, spec, 64, part) ==
          free_evolution_A_norm(u0, T, spec, 64));
  }
}

TEST_CASE("heat smoothing constant estimator") {
  Grid g = make_grid(2, 32, 1.0);
  BesovSpec spec = critical_spec(2, 2.0, 2.0);
  std::vector<unsigned long long> seeds;
  for (unsigned long long i = 0; i < 20; ++i) seeds.push_back(100 + i);

  HeatConstantEstimate est = estimate_heat_constant(seeds, g, spec, 0.25, 128);
  CHECK(est.sample_count == 20);
  REQUIRE(est.q_values.size() == 5);
  REQUIRE(est.q_max_ratio.size() == 5);
  // The free-flow sample pins the q = inf ratio to 1 from below.
  CHECK(est.C_measured >= 1.0 - 1e-12);
  for (double r : est.q_max_ratio) CHECK(r > 0.0);

  SECTION("enlarging the sample set can only raise the sup") {
    for (unsigned long long i = 20; i < 40; ++i) seeds.push_back(100 + i);
    HeatConstantEstimate wide = estimate_heat_constant(seeds, g, spec, 0.25, 128);
    CHECK(wide.C_measured >= est.C_measured);
    CHECK(wide.C_measured <= 4.0 * est.C_measured);
  }

  SECTION("small sample sets are rejected") {
    std::vector<unsigned long long> few(seeds.begin(), seeds.begin() + 5);
    CHECK_THROWS_AS(estimate_heat_constant(few, g, spec, 0.25, 128), std::invalid_argument);
  }
}
