#include <catch2/catch_amalgamated.hpp>

#include <nsbesov/chemin_lerner.hpp>
#include <nsbesov/generators.hpp>
#include <nsbesov/heat.hpp>
#include <nsbesov/ops.hpp>
#include <nsbesov/paraproduct.hpp>

using namespace nsbesov;

TEST_CASE("Bony decomposition reassembles the tensor product") {
  Grid g = make_grid(2, 64, 1.0);
  DyadicPartition part = build_partition(g);

  for (unsigned long long seed : {1ULL, 2ULL, 3ULL}) {
    SpectralField u = gen_divfree_random(seed, -1.5, g);
    SpectralField v = gen_divfree_random(seed + 100, -1.5, g);
    BonyParts parts = paraproduct(u, v, part);

    SpectralField sum = parts.t_uv + parts.t_vu + parts.resonant;
    SpectralField prod = tensor_product(u, v);
    SpectralField err = sum - prod;
    CHECK(l2_norm_spectral(err) < 1e-10 * l2_norm_spectral(prod));
    REQUIRE(parts.t_uv.comps == u.comps * v.comps);
  }
}

TEST_CASE("zero input gives three zero pieces") {
  Grid g = make_grid(2, 32, 1.0);
  DyadicPartition part = build_partition(g);
  SpectralField u(g, g.d);
  SpectralField v = gen_divfree_random(5, -1.0, g);
  BonyParts parts = paraproduct(u, v, part);
  CHECK(l2_norm_spectral(parts.t_uv) == 0.0);
  CHECK(l2_norm_spectral(parts.t_vu) == 0.0);
  CHECK(l2_norm_spectral(parts.resonant) == 0.0);
}

TEST_CASE("widely separated blocks produce a single low-high piece") {
  // u concentrated at a low annulus, v at a far higher one: no resonance and
  // no high-low piece, the product is entirely T_u v.
  Grid g = make_grid(2, 256, 1.0);
  DyadicPartition part = build_partition(g);
  SpectralField u = gen_pure_shell(g, 0);
  SpectralField v = gen_pure_shell(g, 5);

  BonyParts parts = paraproduct(u, v, part);
  const double scale = l2_norm_spectral(tensor_product(u, v));
  CHECK(l2_norm_spectral(parts.resonant) == 0.0);
  CHECK(l2_norm_spectral(parts.t_vu) == 0.0);
  SpectralField err = parts.t_uv - tensor_product(u, v);
  CHECK(l2_norm_spectral(err) < 1e-12 * scale);
}

TEST_CASE("adjacent blocks land in the resonant piece") {
  Grid g = make_grid(2, 256, 1.0);
  DyadicPartition part = build_partition(g);
  SpectralField u = gen_pure_shell(g, 2);
  SpectralField v = gen_pure_shell(g, 2);

  BonyParts parts = paraproduct(u, v, part);
  CHECK(l2_norm_spectral(parts.t_uv) == 0.0);  // S_{j-2} u vanishes on v's blocks
  CHECK(l2_norm_spectral(parts.t_vu) == 0.0);
  SpectralField err = parts.resonant - tensor_product(u, v);
  CHECK(l2_norm_spectral(err) < 1e-12 * l2_norm_spectral(parts.resonant));
}

TEST_CASE("block tables of the pieces match direct per-node evaluation") {
  Grid g = make_grid(2, 64, 1.0);
  DyadicPartition part = build_partition(g);
  SpectralField a0 = gen_divfree_random(7, -2.0, g);
  SpectralField b0 = gen_divfree_random(8, -2.0, g);
  Trajectory a = make_free_trajectory(a0, 0.05, 4);
  Trajectory b = make_free_trajectory(b0, 0.05, 4);

  BonyPartTables tables = paraproduct_block_tables(a, b, part, 2.0);
  REQUIRE(tables.t_uv.node_count() == 5);

  for (int i = 0; i <= 4; ++i) {
    BonyParts parts = paraproduct(a.nodes[static_cast<std::size_t>(i)],
                                  b.nodes[static_cast<std::size_t>(i)], part);
    const SpectralField* fields[3] = {&parts.t_uv, &parts.t_vu, &parts.resonant};
    const BlockNormTable* tabs[3] = {&tables.t_uv, &tables.t_vu, &tables.resonant};
    for (int w = 0; w < 3; ++w) {
      std::vector<double> norms = block_lp_norms(*fields[w], part, 2.0);
      for (int j = part.j_min; j <= part.j_max; ++j) {
        double direct = norms[static_cast<std::size_t>(j - part.j_min)];
        double tabled = tabs[w]->row(j)[static_cast<std::size_t>(i)];
        CHECK(tabled == Catch::Approx(direct).margin(1e-14).epsilon(1e-12));
      }
    }
  }
}
