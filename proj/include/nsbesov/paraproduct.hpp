#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <nsbesov/dyadic.hpp>
#include <nsbesov/field.hpp>
#include <nsbesov/grid.hpp>
#include <nsbesov/trajectory.hpp>

namespace nsbesov {

/// Bony splitting of the pointwise product u (x) v over the resolved dyadic
/// range: t_uv = sum_j S_{j-1}u . block_j v (u carries the low frequencies),
/// t_vu the mirror, resonant the |j - j'| <= 1 diagonal. All three live in
/// the tensor layout of tensor_product (entry cu * v.comps + cv = u_cu v_cv),
/// and for mean-free band-limited inputs their sum reproduces the dealiased
/// product exactly (the zero modes of u and v carry no block content).
struct BonyParts {
  SpectralField t_uv;
  SpectralField t_vu;
  SpectralField resonant;
};

namespace detail {

inline std::vector<PhysicalField> physical_blocks(const SpectralField& f,
                                                  const DyadicPartition& part) {
  std::vector<PhysicalField> out;
  out.reserve(static_cast<std::size_t>(part.count()));
  for (int j = part.j_min; j <= part.j_max; ++j)
    out.push_back(transform_to_physical(block(f, part, j)));
  return out;
}

inline void add_into(PhysicalField& acc, const PhysicalField& x) {
  for (int c = 0; c < acc.comps; ++c) {
    double* a = acc.val[static_cast<std::size_t>(c)].data();
    const double* b = x.val[static_cast<std::size_t>(c)].data();
    for (std::size_t i = 0; i < acc.grid.size(); ++i) a[i] += b[i];
  }
}

/// acc[cu * vcomps + cv] += uside[cu] * vside[cv] pointwise.
inline void accumulate_product(PhysicalField& acc, const PhysicalField& uside,
                               const PhysicalField& vside) {
  const std::size_t m = acc.grid.size();
  for (int cu = 0; cu < uside.comps; ++cu)
    for (int cv = 0; cv < vside.comps; ++cv) {
      double* a = acc.val[static_cast<std::size_t>(cu * vside.comps + cv)].data();
      const double* x = uside.val[static_cast<std::size_t>(cu)].data();
      const double* y = vside.val[static_cast<std::size_t>(cv)].data();
      for (std::size_t i = 0; i < m; ++i) a[i] += x[i] * y[i];
    }
}

}  // namespace detail

inline BonyParts paraproduct(const SpectralField& u, const SpectralField& v,
                             const DyadicPartition& part) {
  if (u.grid != v.grid || u.grid != part.grid)
    throw std::invalid_argument("paraproduct: grid mismatch");
  const Grid& g = u.grid;
  const int cnt = part.count();
  const std::vector<PhysicalField> pb_u = detail::physical_blocks(u, part);
  const std::vector<PhysicalField> pb_v = detail::physical_blocks(v, part);
  // Running low-frequency sums S_{j-1} = sum of rows <= r - 2, grown as r
  // advances so no prefix table is ever stored.
  PhysicalField low_u(g, u.comps);
  PhysicalField low_v(g, v.comps);
  PhysicalField acc_uv(g, u.comps * v.comps);
  PhysicalField acc_vu(g, u.comps * v.comps);
  PhysicalField acc_rr(g, u.comps * v.comps);
  for (int r = 0; r < cnt; ++r) {
    if (r >= 2) {
      detail::add_into(low_u, pb_u[static_cast<std::size_t>(r - 2)]);
      detail::add_into(low_v, pb_v[static_cast<std::size_t>(r - 2)]);
      detail::accumulate_product(acc_uv, low_u, pb_v[static_cast<std::size_t>(r)]);
      detail::accumulate_product(acc_vu, pb_u[static_cast<std::size_t>(r)], low_v);
    }
    for (int dr = -1; dr <= 1; ++dr) {
      const int rp = r + dr;
      if (rp < 0 || rp >= cnt) continue;
      detail::accumulate_product(acc_rr, pb_u[static_cast<std::size_t>(r)],
                                 pb_v[static_cast<std::size_t>(rp)]);
    }
  }
  BonyParts parts{transform_to_spectral(acc_uv), transform_to_spectral(acc_vu),
                  transform_to_spectral(acc_rr)};
  dealias(parts.t_uv);
  dealias(parts.t_vu);
  dealias(parts.resonant);
  return parts;
}

/// Per-node block-norm tables of the three Bony pieces of a (x) b along a
/// pair of trajectories; pieces are reduced node by node and never stored.
struct BonyPartTables {
  BlockNormTable t_uv;
  BlockNormTable t_vu;
  BlockNormTable resonant;
};

inline BonyPartTables paraproduct_block_tables(const Trajectory& a, const Trajectory& b,
                                               const DyadicPartition& part, double p) {
  validate_trajectory(a);
  validate_trajectory(b);
  if (a.grid != b.grid || a.nodes.size() != b.nodes.size() || a.horizon != b.horizon)
    throw std::invalid_argument("paraproduct tables: incompatible trajectories");
  BonyPartTables tables;
  BlockNormTable* order[3] = {&tables.t_uv, &tables.t_vu, &tables.resonant};
  for (BlockNormTable* t : order) {
    t->j_min = part.j_min;
    t->j_max = part.j_max;
    t->horizon = a.horizon;
    t->p = p;
    t->norms.assign(static_cast<std::size_t>(part.count()),
                    std::vector<double>(a.nodes.size(), 0.0));
  }
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const BonyParts parts = paraproduct(a.nodes[i], b.nodes[i], part);
    const SpectralField* fields[3] = {&parts.t_uv, &parts.t_vu, &parts.resonant};
    for (int piece = 0; piece < 3; ++piece) {
      const std::vector<double> blocks = block_lp_norms(*fields[piece], part, p);
      for (int r = 0; r < part.count(); ++r)
        order[piece]->norms[static_cast<std::size_t>(r)][i] = blocks[static_cast<std::size_t>(r)];
    }
  }
  return tables;
}

}  // namespace nsbesov
