#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <nsbesov/besov.hpp>
#include <nsbesov/generators.hpp>
#include <nsbesov/lifespan.hpp>

using namespace nsbesov;

namespace {

/// Pure-shell profile scaled so its single weighted block value equals v.
SpectralField shell_block(const Grid& g, const DyadicPartition& part, const BesovSpec& spec,
                          int j, double v) {
  SpectralField f = gen_pure_shell(g, j);
  normalize_besov(f, part, spec, v);
  return f;
}

}  // namespace

TEST_CASE("smallness parameter branches and closed forms") {
  const double C1 = 48.0;

  SECTION("local branch at E0 = 1") {
    SmallnessReport rep = small_constant_a(1.0, C1);
    CHECK_FALSE(rep.global_case);
    CHECK(rep.a == 1.0 / 36864.0);  // 1/(16 C1^2 E0) is the active term
    CHECK(rep.a_three_term == rep.a);
    CHECK(rep.a_two_term ==
          std::min(1.0 / 36864.0, 1.0 / (std::pow(4.0, 4.0 / 3.0) * C1)));
  }

  SECTION("global branch doubles the datum size") {
    const double E0 = 1.0 / (32.0 * C1);
    SmallnessReport rep = small_constant_a(E0, C1);
    CHECK(rep.global_case);
    CHECK(rep.a == 2.0 * E0);
    // Boundary value belongs to the global branch.
    CHECK(small_constant_a(1.0 / (16.0 * C1), C1).global_case);
    CHECK_FALSE(small_constant_a(1.0000001 / (16.0 * C1), C1).global_case);
  }

  SECTION("a is nonincreasing in the datum size on the local branch") {
    CHECK(small_constant_a(1.0, C1).a >= small_constant_a(2.0, C1).a);
    CHECK(small_constant_a(2.0, C1).a >= small_constant_a(8.0, C1).a);
  }

  SECTION("positivity validation") {
    CHECK_THROWS_AS(small_constant_a(0.0, C1), std::invalid_argument);
    CHECK_THROWS_AS(small_constant_a(1.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("lifespan report on a two-shell datum") {
  Grid g = make_grid(2, 64, 1.0);
  DyadicPartition part = build_partition(g);
  BesovSpec spec{0.0, 2.0, inf};
  const double C1 = 48.0;

  SpectralField u0 = shell_block(g, part, spec, 0, 1.0) + shell_block(g, part, spec, 3, 0.125);
  LifespanReport rep = lifespan_T(u0, part, spec, C1);

  CHECK_FALSE(rep.global_branch);
  CHECK(rep.E0 == Catch::Approx(1.0).epsilon(1e-13));
  CHECK(rep.a == small_constant_a(rep.E0, C1).a);
  CHECK(rep.j0 == 4);  // first index whose two-sided tail drops below a/4
  CHECK(rep.unresolved_tail_warning);  // no low-side blocks witness |j| >= 4
  const double pow2 = std::exp2(2.0 * rep.j0);
  CHECK(rep.T0 == (rep.a / 4.0) / (pow2 * rep.E0));
  CHECK(rep.T1 == (rep.a * rep.a / 16.0) / (pow2 * rep.E0 * rep.E0));
  CHECK(rep.T == std::min(rep.T0, rep.T1));
  CHECK(rep.free_check_horizon == rep.T);
  CHECK(rep.free_check_ok);

  SECTION("free check can be disabled") {
    LifespanOptions opt;
    opt.do_free_check = false;
    LifespanReport quiet = lifespan_T(u0, part, spec, C1, opt);
    CHECK(quiet.free_A_norm == 0.0);
    CHECK_FALSE(quiet.free_check_ok);
    CHECK(quiet.T == rep.T);
  }

  SECTION("zero datum is rejected") {
    SpectralField z(g, 2);
    CHECK_THROWS_AS(lifespan_T(z, part, spec, C1), std::invalid_argument);
  }
}

TEST_CASE("global branch reports an infinite lifespan") {
  Grid g = make_grid(2, 32, 1.0);
  DyadicPartition part = build_partition(g);
  BesovSpec spec{0.0, 2.0, inf};
  SpectralField u0 = taylor_green(g, 1.0);
  normalize_besov(u0, part, spec, 1.0 / 1536.0);  // below 1/(16 C1)

  LifespanReport rep = lifespan_T(u0, part, spec, 48.0);
  CHECK(rep.global_branch);
  CHECK(std::isinf(rep.T));
  CHECK(rep.a == 2.0 * rep.E0);
  CHECK(rep.free_check_horizon == 10.0);
  CHECK(rep.free_A_norm <= rep.a * (1.0 + 1e-3));
  CHECK(rep.free_check_ok);
}

TEST_CASE("approximating-sequence construction and lifespan convergence") {
  Grid g = make_grid(2, 256, 1.0);
  DyadicPartition part = build_partition(g);
  BesovSpec spec{0.0, 2.0, inf};
  const double C1 = 48.0;

  // Design the tail so the threshold scan needs two levels: the block-4
  // value 1.25 eps sits between a/4 - eps and a/4 - eps/2.
  const double a0 = small_constant_a(1.0, C1).a;
  const double eps0 = a0 / 8.0;
  SpectralField u0 = shell_block(g, part, spec, 0, 1.0) +
                     shell_block(g, part, spec, 3, 0.125) +
                     shell_block(g, part, spec, 4, 1.25 * eps0);

  SpectralField gdir = shell_block(g, part, spec, 2, 1.0);
  const std::vector<double> factors = {3.0, 1.5, 0.9, 0.45, 0.22, 0.11};
  std::vector<SpectralField> seq;
  for (double f : factors) seq.push_back(u0 + (f * eps0) * gdir);

  JnSequenceReport jn = construct_jn_sequence(seq, u0, part, spec, C1);
  CHECK(jn.epsilon == Catch::Approx(eps0).epsilon(1e-12));
  CHECK(jn.j0_limit == 4);
  REQUIRE(jn.N_per_m.size() == 2);  // scan stops once jbar^m hits the limit
  CHECK(jn.N_per_m[0] == 2);
  CHECK(jn.N_per_m[1] == 3);
  REQUIRE(jn.jbar.size() == 2);
  CHECK(jn.jbar[0] == 5);
  CHECK(jn.jbar[1] == 4);
  CHECK(jn.N_eps == 2);
  REQUIRE(jn.rows.size() == factors.size());
  CHECK_FALSE(jn.rows[0].valid);
  CHECK_FALSE(jn.rows[1].valid);
  CHECK(jn.rows[2].m == 1);
  CHECK(jn.rows[2].j0n == 5);
  CHECK(jn.rows[3].m == 2);
  CHECK(jn.rows[3].j0n == 4);
  for (const JnRow& row : jn.rows)
    if (row.valid) CHECK(row.tail_at_j0n < jn.a / 4.0);
  CHECK(jn.stabilized);
  CHECK(jn.stabilization_index == 3);

  SECTION("per-datum lifespans collapse onto the limit beyond stabilization") {
    LifespanSequenceReport ls = lifespan_sequence(seq, u0, part, spec, C1);
    CHECK(ls.base.j0 == 4);
    CHECK(ls.T == ls.base.T);
    REQUIRE(ls.rows.size() == factors.size());
    // The perturbation is supported strictly below the sup-attaining block,
    // so E0n and an match the base values bit for bit; beyond stabilization
    // the shared j0n makes Tn = T exactly.
    for (std::size_t n = 3; n < ls.rows.size(); ++n) {
      CHECK(ls.rows[n].E0n == ls.base.E0);
      CHECK(ls.rows[n].Tn == ls.T);
    }
    CHECK(ls.rows[2].Tn == ls.T / 4.0);  // one-higher j0n, exact quarter
    CHECK(ls.sup_dev_beyond_Neps == Catch::Approx(0.75 * ls.T).epsilon(1e-12));
    CHECK(ls.common_horizon == ls.T - ls.delta);
    CHECK(ls.delta == Catch::Approx(0.1 * ls.T).epsilon(1e-15));

    CHECK_THROWS_AS(lifespan_sequence(seq, u0, part, spec, C1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lifespan_sequence(seq, u0, part, spec, C1, 1.0), std::invalid_argument);
  }

  SECTION("construction error paths") {
    CHECK_THROWS_AS(construct_jn_sequence({}, u0, part, spec, C1), std::invalid_argument);

    std::vector<SpectralField> widening = {u0 + (0.5 * eps0) * gdir, u0 + eps0 * gdir};
    CHECK_THROWS_AS(construct_jn_sequence(widening, u0, part, spec, C1),
                    std::invalid_argument);

    std::vector<SpectralField> coarse = {u0 + (3.0 * eps0) * gdir, u0 + (2.0 * eps0) * gdir};
    CHECK_THROWS_WITH(construct_jn_sequence(coarse, u0, part, spec, C1),
                      Catch::Matchers::ContainsSubstring("insufficient convergence"));
  }
}

TEST_CASE("dyadic rescaling: one index up, amplitude one, lifespan quarters") {
  Grid g = make_grid(2, 256, 1.0);
  DyadicPartition part = build_partition(g);
  BesovSpec spec{0.0, 2.0, inf};
  const double C1 = 48.0;

  SpectralField u0 = shell_block(g, part, spec, 0, 1.0) + shell_block(g, part, spec, 3, 0.125);
  SpectralField shifted = dyadic_shift(u0, 1, 1.0);

  LifespanReport base = lifespan_T(u0, part, spec, C1);
  LifespanReport moved = lifespan_T(shifted, part, spec, C1);
  CHECK(moved.E0 == Catch::Approx(base.E0).epsilon(1e-13));
  CHECK(moved.a == Catch::Approx(base.a).epsilon(1e-13));
  CHECK(moved.j0 == base.j0 + 1);
  CHECK(moved.T / base.T == Catch::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("global base datum cannot anchor a sequence") {
  Grid g = make_grid(2, 32, 1.0);
  DyadicPartition part = build_partition(g);
  BesovSpec spec{0.0, 2.0, inf};
  SpectralField u0 = taylor_green(g, 1e-9);
  std::vector<SpectralField> seq = {u0};
  CHECK_THROWS_AS(lifespan_sequence(seq, u0, part, spec, 48.0), std::invalid_argument);
}
