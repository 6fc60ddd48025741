#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <nsbesov/besov.hpp>
#include <nsbesov/dyadic.hpp>
#include <nsbesov/trajectory.hpp>

namespace nsbesov {

/// Supported inner time exponents: 1, 4/3, 2, 4, infinity.
inline bool is_supported_time_exponent(double q) {
  return q == 1.0 || q == 4.0 / 3.0 || q == 2.0 || q == 4.0 || std::isinf(q);
}

/// L^q norm in time of a sampled scalar path on the uniform node grid,
/// composite trapezoid in t (endpoint weights dt/2), max over nodes for
/// q = infinity.
inline double time_lq_norm(const std::vector<double>& values, double horizon, double q) {
  if (!is_supported_time_exponent(q))
    throw std::invalid_argument("time norm: unsupported exponent q");
  if (values.size() < 2) throw std::invalid_argument("time norm: needs at least 2 nodes");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  const double dt = horizon / static_cast<double>(values.size() - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = (i == 0 || i + 1 == values.size()) ? dt / 2.0 : dt;
    acc += w * std::pow(std::abs(values[i]), q);
  }
  return std::pow(acc, 1.0 / q);
}

/// Time-first mixed norm: ell^r over j of 2^{s j} ||block_j u||_{L^q_T L^p}.
inline double chemin_lerner_norm(const BlockNormTable& table, double q, const BesovSpec& spec) {
  if (!is_supported_time_exponent(q))
    throw std::invalid_argument("chemin_lerner_norm: unsupported exponent q");
  if (table.p != spec.p)
    throw std::invalid_argument("chemin_lerner_norm: table built for a different p");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(table.count()));
  for (int j = table.j_min; j <= table.j_max; ++j)
    terms.push_back(dyadic_weight(spec.s, j) * time_lq_norm(table.row(j), table.horizon, q));
  return lr_accumulate(terms, spec.r);
}

inline double chemin_lerner_norm(const Trajectory& traj, const DyadicPartition& part, double q,
                                 const BesovSpec& spec) {
  return chemin_lerner_norm(build_block_table(traj, part, spec.p), q, spec);
}

/// Space-first mixed norm: L^q in time of the node-wise Besov norm.
inline double standard_time_besov_norm(const BlockNormTable& table, double q,
                                       const BesovSpec& spec) {
  const int nodes = table.node_count();
  std::vector<double> per_node(static_cast<std::size_t>(nodes), 0.0);
  std::vector<double> terms(static_cast<std::size_t>(table.count()), 0.0);
  for (int i = 0; i < nodes; ++i) {
    for (int j = table.j_min; j <= table.j_max; ++j)
      terms[static_cast<std::size_t>(j - table.j_min)] =
          dyadic_weight(spec.s, j) * table.row(j)[static_cast<std::size_t>(i)];
    per_node[static_cast<std::size_t>(i)] = lr_accumulate(terms, spec.r);
  }
  return time_lq_norm(per_node, table.horizon, q);
}

/// Both orderings of the mixed norm; the caller asserts the Minkowski
/// direction (time-first <= space-first when q <= r and >= when q >= r).
inline std::pair<double, double> minkowski_check(const BlockNormTable& table, double q,
                                                 const BesovSpec& spec) {
  return {chemin_lerner_norm(table, q, spec), standard_time_besov_norm(table, q, spec)};
}

inline std::pair<double, double> minkowski_check(const Trajectory& traj,
                                                 const DyadicPartition& part, double q,
                                                 const BesovSpec& spec) {
  return minkowski_check(build_block_table(traj, part, spec.p), q, spec);
}

/// Solution-space norm for the fixed-point argument at critical regularity
/// s = d/p - 1: the larger of ||.||_{L~^2_T(B^{s+1})} and ||.||_{L~^1_T(B^{s+2})}.
inline double a_norm(const BlockNormTable& table, const BesovSpec& critical) {
  BesovSpec mid = critical;
  mid.s = critical.s + 1.0;
  BesovSpec high = critical;
  high.s = critical.s + 2.0;
  return std::max(chemin_lerner_norm(table, 2.0, mid), chemin_lerner_norm(table, 1.0, high));
}

}  // namespace nsbesov
