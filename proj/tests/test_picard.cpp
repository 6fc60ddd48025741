#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <nsbesov/besov.hpp>
#include <nsbesov/generators.hpp>
#include <nsbesov/lifespan.hpp>
#include <nsbesov/ops.hpp>
#include <nsbesov/picard.hpp>

using namespace nsbesov;

namespace {

PicardConstants constants_for(const SpectralField& u0, const DyadicPartition& part,
                              const BesovSpec& spec, double C1 = 48.0) {
  PicardConstants c;
  c.E0 = besov_norm(u0, part, spec);
  c.a = small_constant_a(c.E0, C1).a;
  c.C1 = C1;
  return c;
}

}  // namespace

TEST_CASE("small datum: contraction, hypotheses, residual") {
  Grid g = make_grid(2, 32, 1.0);
  DyadicPartition part = build_partition(g);
  BesovSpec spec = critical_spec(2, 2.0, 2.0);
  SpectralField u0 = taylor_green(g, 1e-3);
  PicardConstants c = constants_for(u0, part, spec);

  const double tol = 1e-8;
  PicardResult res = picard_solve(u0, 0.05, 16, 40, tol, c, spec);
  const IterationDiagnostics& diag = res.diagnostics;

  REQUIRE(diag.converged);
  REQUIRE(static_cast<int>(diag.rows.size()) == diag.iterations);
  CHECK(diag.rows.back().diff_total < tol);
  // The low-cut scheme admits the datum's annuli one per iterate; for a
  // single-annulus datum admission finishes at iterate 2 and every later
  // ratio is a pure contraction ratio.
  REQUIRE(diag.iterations >= 3);
  for (std::size_t i = 0; i < diag.rows.size(); ++i) {
    CHECK(diag.rows[i].iter == static_cast<int>(i) + 1);
    if (i >= 2) CHECK(diag.rows[i].ratio < 0.9);
  }
  CHECK(diag.residual_rel < 5.0 * tol);

  // Every produced node is solenoidal; node 0 is the (saturated low-cut) datum.
  const double scale = l2_norm_spectral(u0);
  for (const SpectralField& node : res.solution.nodes)
    REQUIRE(divergence_defect(node) < 1e-12 * scale);
  CHECK(l2_norm_spectral(res.solution.nodes.front() - u0) == 0.0);

  SECTION("hypothesis monitors hold on the returned trajectory") {
    auto [h1, h2] = monitor_bounds(res.solution, c.E0, c.a, spec);
    CHECK(h1);
    CHECK(h2);
    auto [h1_tight, h2_tight] = monitor_bounds(res.solution, c.E0 / 4.0, c.a, spec);
    CHECK_FALSE(h1_tight);
    CHECK_THROWS_AS(monitor_bounds(res.solution, 0.0, c.a, spec), std::invalid_argument);
  }

  SECTION("direct data mode agrees with the low-cut scheme at convergence") {
    PicardResult direct = picard_solve(u0, 0.05, 16, 40, tol, c, spec, DataMode::direct);
    REQUIRE(direct.diagnostics.converged);
    SpectralField diff = direct.solution.nodes.back() - res.solution.nodes.back();
    CHECK(l2_norm_spectral(diff) < 1e-5 * scale);
  }
}

TEST_CASE("picard_solve argument validation") {
  Grid g = make_grid(2, 32, 1.0);
  SpectralField u0 = taylor_green(g, 1e-3);
  PicardConstants c{1.0, 0.1, 48.0};
  BesovSpec spec = critical_spec(2, 2.0, 2.0);
  CHECK_THROWS_AS(picard_solve(u0, 0.0, 16, 10, 1e-8, c, spec), std::invalid_argument);
  CHECK_THROWS_AS(picard_solve(u0, 0.1, 4, 10, 1e-8, c, spec), std::invalid_argument);
  CHECK_THROWS_AS(picard_solve(u0, 0.1, 16, 0, 1e-8, c, spec), std::invalid_argument);
  CHECK_THROWS_AS(picard_solve(u0, 0.1, 16, 10, 0.0, c, spec), std::invalid_argument);
  SpectralField scalar(g, 1);
  CHECK_THROWS_AS(picard_solve(scalar, 0.1, 16, 10, 1e-8, c, spec), std::invalid_argument);
}

TEST_CASE("large datum trips the blow-up guard") {
  // A broadband datum far above the smallness scale: the bilinear term
  // inflates the iterates geometrically (an exact eigenfunction such as
  // Taylor-Green would coast along the heat flow forever).
  Grid g = make_grid(2, 32, 1.0);
  DyadicPartition part = build_partition(g);
  BesovSpec spec = critical_spec(2, 2.0, 2.0);
  SpectralField u0 = gen_divfree_random(13, -2.0, g);
  normalize_l2(u0, 200.0);
  PicardConstants c = constants_for(u0, part, spec);
  CHECK_THROWS_WITH(picard_solve(u0, 1.0, 16, 10, 1e-8, c, spec),
                    Catch::Matchers::ContainsSubstring("blow-up"));
}

TEST_CASE("expanding iteration at the cap reports no-convergence") {
  Grid g = make_grid(2, 32, 1.0);
  BesovSpec spec = critical_spec(2, 2.0, 2.0);
  SpectralField u0 = gen_divfree_random(29, -2.0, g);
  normalize_l2(u0, 100.0);  // far above the smallness scale: genuine expansion
  // Deliberately inflated guard constants: the run must die on the ratio
  // check, not the norm guard.
  PicardConstants c{1e9, 1.0, 48.0};
  CHECK_THROWS_WITH(picard_solve(u0, 0.5, 8, 2, 1e-12, c, spec),
                    Catch::Matchers::ContainsSubstring("no-convergence"));

  SECTION("a still-contracting run at the cap returns unconverged instead") {
    SpectralField small = taylor_green(g, 1e-3);
    DyadicPartition part = build_partition(g);
    PicardConstants cs = constants_for(small, part, spec);
    PicardResult res = picard_solve(small, 0.05, 16, 1, 1e-14, cs, spec);
    CHECK_FALSE(res.diagnostics.converged);
    CHECK(res.diagnostics.iterations == 1);
  }
}

TEST_CASE("self-difference of identical data is exactly zero") {
  Grid g = make_grid(2, 32, 1.0);
  DyadicPartition part = build_partition(g);
  BesovSpec spec = critical_spec(2, 2.0, 2.0);
  SpectralField u0 = gen_divfree_random(5, -2.0, g);
  normalize_besov(u0, part, spec, 1e-3);
  PicardConstants c = constants_for(u0, part, spec);

  DifferenceReport rep = self_difference_solve(u0, u0, 0.05, 16, 40, 1e-8, c, spec);
  CHECK(rep.n_inf == 0.0);
  CHECK(rep.n_one == 0.0);
  CHECK(rep.n_43 == 0.0);
  CHECK(rep.n_4 == 0.0);

  SECTION("a small perturbation moves the solution by a comparable amount") {
    SpectralField pert = gen_pure_shell(g, 2);
    normalize_besov(pert, part, spec, 1e-5);
    SpectralField v0 = u0 + pert;
    DifferenceReport moved =
        self_difference_solve(u0, v0, 0.05, 16, 40, 1e-8, c, spec, DataMode::direct);
    const double eps = 1e-5;
    CHECK(moved.n_inf >= eps * (1.0 - 1e-9));  // attained at t = 0
    CHECK(moved.n_inf <= 10.0 * eps);
    CHECK(moved.n_one > 0.0);
    CHECK(moved.n_43 > 0.0);
    CHECK(moved.n_4 > 0.0);
  }
}

TEST_CASE("right-continuity witness at t = 0") {
  Grid g = make_grid(2, 64, 1.0);
  SpectralField u0 = taylor_green(g, 1.0);
  DyadicPartition part = build_partition(g);
  BesovSpec spec = critical_spec(2, 2.0, 2.0);
  const double norm0 = besov_norm(u0, part, spec);

  std::vector<double> ts = {0.1, 0.01, 0.001, 0.0};
  std::vector<double> vals = initial_continuity_check(u0, spec, ts);
  REQUIRE(vals.size() == 4);
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) CHECK(vals[i] > vals[i + 1]);
  CHECK(vals.back() == 0.0);
  // Single-shell datum: || (e^{-2t} - 1) u0 || exactly.
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    CHECK(vals[i] == Catch::Approx((1.0 - std::exp(-2.0 * ts[i])) * norm0).epsilon(1e-12));

  CHECK_THROWS_AS(initial_continuity_check(u0, spec, {}), std::invalid_argument);
  CHECK_THROWS_AS(initial_continuity_check(u0, spec, {0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(initial_continuity_check(u0, spec, {-0.1}), std::invalid_argument);
}

TEST_CASE("continuity step bound") {
  CHECK(continuity_delta(0.1, 2.0, 2.0, 3) == 0.1 / (2.0 * 4.0 * 4096.0));
  CHECK_THROWS_AS(continuity_delta(0.1, 2.0, inf, 3), std::invalid_argument);
  CHECK_THROWS_AS(continuity_delta(0.0, 2.0, 2.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(continuity_delta(0.1, 0.0, 2.0, 3), std::invalid_argument);
}
