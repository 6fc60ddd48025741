#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <nsbesov/besov.hpp>
#include <nsbesov/dyadic.hpp>
#include <nsbesov/field.hpp>
#include <nsbesov/grid.hpp>

namespace nsbesov {

/// Uniformly sampled field path on [0, horizon]: node i sits at
/// t_i = horizon * i / (nodes - 1). At least two nodes (the endpoints).
struct Trajectory {
  Grid grid;
  double horizon = 0.0;
  std::vector<SpectralField> nodes;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int intervals() const { return node_count() - 1; }
  double dt() const { return horizon / intervals(); }
  double time(int i) const { return horizon * static_cast<double>(i) / intervals(); }
};

inline void validate_trajectory(const Trajectory& traj) {
  if (traj.nodes.size() < 2) throw std::invalid_argument("trajectory: needs at least 2 nodes");
  if (!(traj.horizon > 0.0)) throw std::invalid_argument("trajectory: horizon must be positive");
  for (const SpectralField& f : traj.nodes)
    if (f.grid != traj.grid || f.comps != traj.nodes.front().comps)
      throw std::invalid_argument("trajectory: inconsistent node field");
}

/// Node-wise difference a - b (same grid, horizon, node count).
inline Trajectory trajectory_difference(const Trajectory& a, const Trajectory& b) {
  if (a.grid != b.grid || a.nodes.size() != b.nodes.size() || a.horizon != b.horizon)
    throw std::invalid_argument("trajectory_difference: incompatible trajectories");
  Trajectory d;
  d.grid = a.grid;
  d.horizon = a.horizon;
  d.nodes.reserve(a.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) d.nodes.push_back(a.nodes[i] - b.nodes[i]);
  return d;
}

/// Scalar table of dyadic block norms over a trajectory:
/// norms[j - j_min][i] = ||block_j u(t_i)||_{L^p}. Time-space norms of long
/// trajectories reduce to this table, so fields are never duplicated per j.
struct BlockNormTable {
  int j_min = 0;
  int j_max = -1;
  double horizon = 0.0;
  double p = 2.0;
  std::vector<std::vector<double>> norms;

  int count() const { return j_max - j_min + 1; }
  int node_count() const {
    return norms.empty() ? 0 : static_cast<int>(norms.front().size());
  }
  const std::vector<double>& row(int j) const {
    if (j < j_min || j > j_max) throw std::out_of_range("block norm table: j out of range");
    return norms[static_cast<std::size_t>(j - j_min)];
  }
};

/// Builds the table by streaming nodes from a callback field_at(i), so only
/// one field is alive at a time (used for free flows and solver output that
/// need not be stored).
template <typename FieldAt>
inline BlockNormTable build_block_table_streaming(const DyadicPartition& part, double horizon,
                                                  int node_count, double p, FieldAt&& field_at) {
  if (node_count < 2) throw std::invalid_argument("block table: needs at least 2 nodes");
  if (!(horizon > 0.0)) throw std::invalid_argument("block table: horizon must be positive");
  BlockNormTable table;
  table.j_min = part.j_min;
  table.j_max = part.j_max;
  table.horizon = horizon;
  table.p = p;
  table.norms.assign(static_cast<std::size_t>(part.count()),
                     std::vector<double>(static_cast<std::size_t>(node_count), 0.0));
  for (int i = 0; i < node_count; ++i) {
    const SpectralField f = field_at(i);
    const std::vector<double> blocks = block_lp_norms(f, part, p);
    for (int r = 0; r < part.count(); ++r)
      table.norms[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] =
          blocks[static_cast<std::size_t>(r)];
  }
  return table;
}

inline BlockNormTable build_block_table(const Trajectory& traj, const DyadicPartition& part,
                                        double p) {
  validate_trajectory(traj);
  if (traj.grid != part.grid) throw std::invalid_argument("block table: grid mismatch");
  return build_block_table_streaming(part, traj.horizon, traj.node_count(), p,
                                     [&](int i) -> const SpectralField& {
                                       return traj.nodes[static_cast<std::size_t>(i)];
                                     });
}

/// Table of the node-wise difference of two trajectories without ever
/// materializing the difference path.
inline BlockNormTable build_difference_block_table(const Trajectory& a, const Trajectory& b,
                                                   const DyadicPartition& part, double p) {
  validate_trajectory(a);
  validate_trajectory(b);
  if (a.grid != b.grid || a.nodes.size() != b.nodes.size() || a.horizon != b.horizon)
    throw std::invalid_argument("difference block table: incompatible trajectories");
  if (a.grid != part.grid) throw std::invalid_argument("block table: grid mismatch");
  return build_block_table_streaming(part, a.horizon, a.node_count(), p, [&](int i) {
    return a.nodes[static_cast<std::size_t>(i)] - b.nodes[static_cast<std::size_t>(i)];
  });
}

}  // namespace nsbesov
