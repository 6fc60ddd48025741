#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <nsbesov/besov.hpp>
#include <nsbesov/chemin_lerner.hpp>
#include <nsbesov/dyadic.hpp>
#include <nsbesov/field.hpp>
#include <nsbesov/generators.hpp>
#include <nsbesov/ops.hpp>
#include <nsbesov/trajectory.hpp>

namespace nsbesov {

/// e^{t Lap} f: coefficientwise decay exp(-|xi|^2 t), t >= 0.
inline SpectralField heat_propagate(const SpectralField& f, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat_propagate: t must be nonnegative");
  SpectralField out = f;
  for (std::size_t i = 0; i < f.modes(); ++i) {
    const double factor = std::exp(-f.grid.xi_sq(f.grid.freqs(i)) * t);
    for (int c = 0; c < f.comps; ++c) out.coef[c][i] *= factor;
  }
  return out;
}

namespace detail {

/// Per-mode decay factors for one step.
inline std::vector<double> step_factors(const Grid& g, double dt) {
  std::vector<double> e(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) e[i] = std::exp(-g.xi_sq(g.freqs(i)) * dt);
  return e;
}

/// One integrating-factor step of u_t - Lap u = G with trapezoidal forcing:
/// u_next = E u_prev + dt (E g_prev + g_next) / 2.
inline SpectralField heat_step(const SpectralField& u_prev, const SpectralField& g_prev,
                               const SpectralField& g_next, const std::vector<double>& e,
                               double dt) {
  SpectralField out(u_prev.grid, u_prev.comps);
  for (int c = 0; c < u_prev.comps; ++c)
    for (std::size_t i = 0; i < u_prev.modes(); ++i)
      out.coef[c][i] =
          e[i] * u_prev.coef[c][i] + (dt / 2.0) * (e[i] * g_prev.coef[c][i] + g_next.coef[c][i]);
  return out;
}

}  // namespace detail

/// Free evolution sampled on M intervals over [0, T].
inline Trajectory make_free_trajectory(const SpectralField& u0, double T, int M) {
  if (!(T > 0.0) || M < 1) throw std::invalid_argument("free trajectory: need T > 0, M >= 1");
  Trajectory traj;
  traj.grid = u0.grid;
  traj.horizon = T;
  traj.nodes.reserve(static_cast<std::size_t>(M) + 1);
  for (int i = 0; i <= M; ++i) traj.nodes.push_back(heat_propagate(u0, T * i / M));
  return traj;
}

/// Solves u_t - Lap u = G from u(0) = u0 on the forcing's time grid with the
/// exact per-mode integrating factor and trapezoidal forcing (second order).
/// The forcing is consumed (pass by value / move) and its storage becomes the
/// returned solution, so only two extra fields are ever alive.
inline Trajectory solve_heat(const SpectralField& u0, Trajectory forcing) {
  validate_trajectory(forcing);
  if (u0.grid != forcing.grid || u0.comps != forcing.nodes.front().comps)
    throw std::invalid_argument("solve_heat: data/forcing mismatch");
  const double dt = forcing.dt();
  const std::vector<double> e = detail::step_factors(forcing.grid, dt);
  SpectralField g_prev = std::move(forcing.nodes[0]);
  forcing.nodes[0] = u0;
  for (int i = 0; i < forcing.intervals(); ++i) {
    SpectralField g_next = std::move(forcing.nodes[static_cast<std::size_t>(i) + 1]);
    forcing.nodes[static_cast<std::size_t>(i) + 1] =
        detail::heat_step(forcing.nodes[static_cast<std::size_t>(i)], g_prev, g_next, e, dt);
    g_prev = std::move(g_next);
  }
  return forcing;
}

/// Duhamel bilinear term B(u,v)(t) = int_0^t e^{(t-s) Lap} P div(u (x) v) ds,
/// realized as solve_heat(0, P div(u (x) v)); the forcing trajectory is built
/// node by node and solved in place.
inline Trajectory duhamel_bilinear(const Trajectory& u, const Trajectory& v) {
  validate_trajectory(u);
  validate_trajectory(v);
  if (u.grid != v.grid || u.nodes.size() != v.nodes.size() || u.horizon != v.horizon)
    throw std::invalid_argument("duhamel_bilinear: mismatched trajectories");
  Trajectory forcing;
  forcing.grid = u.grid;
  forcing.horizon = u.horizon;
  forcing.nodes.reserve(u.nodes.size());
  for (std::size_t i = 0; i < u.nodes.size(); ++i) {
    SpectralField f = divergence(tensor_product(u.nodes[i], v.nodes[i]));
    leray_project(f);
    forcing.nodes.push_back(std::move(f));
  }
  return solve_heat(zero_field(u.grid, u.nodes.front().comps), std::move(forcing));
}

/// Solution-space norm of the free flow: max of the two constituent
/// Chemin-Lerner norms at regularities spec.s + 1 (q = 2) and spec.s + 2
/// (q = 1), with spec the critical-regularity base point. Fields are
/// streamed, never stored as a trajectory.
inline double free_evolution_A_norm(const SpectralField& u0, double T, const BesovSpec& spec,
                                    int M, const DyadicPartition& part) {
  if (!(T > 0.0) || M < 1)
    throw std::invalid_argument("free_evolution_A_norm: need T > 0, M >= 1");
  const BlockNormTable table = build_block_table_streaming(
      part, T, M + 1, spec.p, [&](int i) { return heat_propagate(u0, T * i / M); });
  return a_norm(table, spec);
}

inline double free_evolution_A_norm(const SpectralField& u0, double T, const BesovSpec& spec,
                                    int M) {
  return free_evolution_A_norm(u0, T, spec, M, build_partition(u0.grid));
}

/// Empirical smoothing constant of the forced heat estimate.
struct HeatConstantEstimate {
  double C_measured = 0.0;
  int sample_count = 0;
  std::vector<double> q_values;
  std::vector<double> q_max_ratio;  // largest ratio observed per q
};

/// Measures sup over samples and q in {inf, 4/3, 2, 4, 1} of
/// ||u||_{L~^q_T(B^{s+2/q})} / (||u0||_{B^s} + ||G||_{L~^1_T(B^s)}) for
/// randomized (u0, G) pairs with G constant in time; the first sample is the
/// free flow (G = 0), whose q = inf ratio equals 1 and anchors the lower
/// bound C_measured >= 1.
inline HeatConstantEstimate estimate_heat_constant(const std::vector<unsigned long long>& seeds,
                                                   const Grid& grid, const BesovSpec& spec,
                                                   double T, int M = 512) {
  if (seeds.size() < 20)
    throw std::invalid_argument("estimate_heat_constant: needs at least 20 samples");
  if (!(T > 0.0) || M < 1)
    throw std::invalid_argument("estimate_heat_constant: need T > 0, M >= 1");
  const DyadicPartition part = build_partition(grid);
  const std::vector<double> qs = {inf, 4.0 / 3.0, 2.0, 4.0, 1.0};
  HeatConstantEstimate est;
  est.sample_count = static_cast<int>(seeds.size());
  est.q_values = qs;
  est.q_max_ratio.assign(qs.size(), 0.0);
  const double dt = T / M;
  const std::vector<double> e = detail::step_factors(grid, dt);
  for (std::size_t s_idx = 0; s_idx < seeds.size(); ++s_idx) {
    SpectralField u0 = gen_divfree_random(seeds[s_idx], -2.0, grid);
    normalize_besov(u0, part, spec, 1.0);
    SpectralField G = zero_field(grid, grid.d);
    if (s_idx > 0) {
      G = gen_divfree_random(seeds[s_idx] ^ 0x9e3779b97f4a7c15ULL, -2.0, grid);
      normalize_besov(G, part, spec, 1.0);
    }
    // March the per-mode recurrence once, reducing each node to block norms.
    BlockNormTable table;
    table.j_min = part.j_min;
    table.j_max = part.j_max;
    table.horizon = T;
    table.p = spec.p;
    table.norms.assign(static_cast<std::size_t>(part.count()),
                       std::vector<double>(static_cast<std::size_t>(M) + 1, 0.0));
    SpectralField u = u0;
    for (int i = 0; i <= M; ++i) {
      const std::vector<double> blocks = block_lp_norms(u, part, spec.p);
      for (int r = 0; r < part.count(); ++r)
        table.norms[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] =
            blocks[static_cast<std::size_t>(r)];
      if (i < M) u = detail::heat_step(u, G, G, e, dt);
    }
    const double denom =
        besov_norm(u0, part, spec) + T * besov_norm(G, part, spec);
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
      BesovSpec lifted = spec;
      lifted.s = spec.s + (std::isinf(qs[qi]) ? 0.0 : 2.0 / qs[qi]);
      const double ratio = chemin_lerner_norm(table, qs[qi], lifted) / denom;
      if (!std::isfinite(ratio))
        throw std::runtime_error("estimate_heat_constant: sample solve diverged");
      est.q_max_ratio[qi] = std::max(est.q_max_ratio[qi], ratio);
      est.C_measured = std::max(est.C_measured, ratio);
    }
  }
  return est;
}

}  // namespace nsbesov
