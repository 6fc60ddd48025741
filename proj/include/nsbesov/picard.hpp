#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nsbesov/besov.hpp>
#include <nsbesov/chemin_lerner.hpp>
#include <nsbesov/dyadic.hpp>
#include <nsbesov/field.hpp>
#include <nsbesov/heat.hpp>
#include <nsbesov/ops.hpp>
#include <nsbesov/trajectory.hpp>

namespace nsbesov {

/// Data fed to iterate n+1: the scheme's dyadic low cut S_n u0, or the full
/// datum u0 for comparison runs.
enum class DataMode { lowcut, direct };

/// Smallness data the iteration is monitored against.
struct PicardConstants {
  double E0 = 0.0;
  double a = 0.0;
  double C1 = 0.0;
};

/// One row per produced iterate u^n (n >= 1; u^0 is the free flow).
struct IterationRow {
  int iter = 0;
  double h1_norm = 0.0;      // ||u^n||_{L~^inf_T(B^{s})}, s = d/p - 1
  double a_norm_value = 0.0; // ||u^n||_A
  double diff_43 = 0.0;      // ||u^n - u^{n-1}||_{L~^{4/3}(B^{s+3/2})}
  double diff_4 = 0.0;       // ||u^n - u^{n-1}||_{L~^4(B^{s+1/2})}
  double diff_total = 0.0;
  double ratio = 0.0;        // diff_total(n) / diff_total(n-1), 0 for n = 1
  bool h1_ok = false;        // h1_norm <= 2 E0
  bool h2_ok = false;        // a_norm <= 2 a
};

struct IterationDiagnostics {
  std::vector<IterationRow> rows;
  bool converged = false;
  int iterations = 0;
  double residual_rel = 0.0;  // ||u - e^{t Lap}u0 + B(u,u)|| / ||u||, q = inf at s
  double final_h1 = 0.0;
  double final_a_norm = 0.0;
};

struct PicardResult {
  Trajectory solution;
  IterationDiagnostics diagnostics;
};

/// Both hypothesis flags for a trajectory: the critical L~^inf norm against
/// 2 E0 and the A-norm against 2 a.
inline std::pair<bool, bool> monitor_bounds(const BlockNormTable& table, double E0, double a,
                                            const BesovSpec& spec) {
  if (!(E0 > 0.0) || !(a > 0.0))
    throw std::invalid_argument("monitor_bounds: E0 and a must be positive");
  const double h1 = chemin_lerner_norm(table, inf, spec);
  const double h2 = a_norm(table, spec);
  return {h1 <= 2.0 * E0, h2 <= 2.0 * a};
}

inline std::pair<bool, bool> monitor_bounds(const Trajectory& traj, double E0, double a,
                                            const BesovSpec& spec) {
  return monitor_bounds(build_block_table(traj, build_partition(traj.grid), spec.p), E0, a, spec);
}

namespace detail {

/// free(data)(t_i) - B_i, overwriting B in place.
inline void free_minus_b(const SpectralField& data, Trajectory& b) {
  for (int i = 0; i < b.node_count(); ++i) {
    SpectralField free_node = heat_propagate(data, b.time(i));
    free_node -= b.nodes[static_cast<std::size_t>(i)];
    b.nodes[static_cast<std::size_t>(i)] = std::move(free_node);
  }
}

inline Trajectory nonlinear_forcing(const Trajectory& u) {
  Trajectory forcing;
  forcing.grid = u.grid;
  forcing.horizon = u.horizon;
  forcing.nodes.reserve(u.nodes.size());
  for (const SpectralField& node : u.nodes) {
    SpectralField f = divergence(tensor_product(node, node));
    leray_project(f);
    forcing.nodes.push_back(std::move(f));
  }
  return forcing;
}

}  // namespace detail

/// Picard iteration for the mild formulation: u^0 = e^{t Lap}u0 and
/// u^{n+1} = e^{t Lap}(data_n) - B(u^n, u^n) with data_n = S_n u0 (lowcut
/// mode) or u0 (direct mode). Convergence is declared when the successive
/// difference in L~^{4/3}(B^{s+3/2}) + L~^4(B^{s+1/2}) falls below tol; in
/// lowcut mode the break is additionally gated on cut saturation, so the
/// returned trajectory always solves the full datum, never a truncation.
/// Throws "blow-up" if a monitored norm exceeds 10 max(2 E0, 1) and
/// "no-convergence" if max_iter is reached while the ratio is still >= 1.
inline PicardResult picard_solve(const SpectralField& u0, double T, int M, int max_iter,
                                 double tol, const PicardConstants& constants,
                                 const BesovSpec& spec, DataMode mode = DataMode::lowcut) {
  if (!(T > 0.0)) throw std::invalid_argument("picard_solve: T must be positive");
  if (M < 8) throw std::invalid_argument("picard_solve: needs M >= 8 time intervals");
  if (max_iter < 1 || !(tol > 0.0))
    throw std::invalid_argument("picard_solve: bad iteration controls");
  if (u0.comps != u0.grid.d) throw std::invalid_argument("picard_solve: expects a velocity field");
  const DyadicPartition part = build_partition(u0.grid);
  const double guard = 10.0 * std::max(2.0 * constants.E0, 1.0);

  PicardResult result;
  IterationDiagnostics& diag = result.diagnostics;
  Trajectory u_prev = make_free_trajectory(u0, T, M);
  double prev_diff = 0.0;
  for (int n = 1; n <= max_iter; ++n) {
    const SpectralField data =
        (mode == DataMode::lowcut) ? low_cut(u0, part, n - 1) : u0;
    Trajectory u_next = solve_heat(zero_field(u0.grid, u0.comps),
                                   detail::nonlinear_forcing(u_prev));
    detail::free_minus_b(data, u_next);

    const BlockNormTable diff_table = build_difference_block_table(u_next, u_prev, part, spec.p);
    BesovSpec mid = spec;
    mid.s = spec.s + 1.5;
    BesovSpec low = spec;
    low.s = spec.s + 0.5;
    IterationRow row;
    row.iter = n;
    row.diff_43 = chemin_lerner_norm(diff_table, 4.0 / 3.0, mid);
    row.diff_4 = chemin_lerner_norm(diff_table, 4.0, low);
    row.diff_total = row.diff_43 + row.diff_4;
    row.ratio = (n >= 2 && prev_diff > 0.0) ? row.diff_total / prev_diff : 0.0;

    const BlockNormTable table = build_block_table(u_next, part, spec.p);
    row.h1_norm = chemin_lerner_norm(table, inf, spec);
    row.a_norm_value = a_norm(table, spec);
    row.h1_ok = row.h1_norm <= 2.0 * constants.E0;
    row.h2_ok = row.a_norm_value <= 2.0 * constants.a;
    diag.rows.push_back(row);
    diag.iterations = n;
    diag.final_h1 = row.h1_norm;
    diag.final_a_norm = row.a_norm_value;

    if (!std::isfinite(row.h1_norm) || !std::isfinite(row.a_norm_value) ||
        row.h1_norm > guard || row.a_norm_value > guard)
      throw std::runtime_error("picard_solve: blow-up");

    u_prev = std::move(u_next);
    const bool admitted = (mode == DataMode::direct) || low_cut_saturated(part, n);
    if (admitted && row.diff_total < tol) {
      diag.converged = true;
      break;
    }
    if (n == max_iter && row.ratio >= 1.0)
      throw std::runtime_error("picard_solve: no-convergence");
    prev_diff = row.diff_total;
  }

  // Mild-equation residual of the returned iterate against the full datum:
  // r = u - e^{t Lap}u0 + B(u,u), reported relative in L~^inf(B^s).
  {
    Trajectory residual = solve_heat(zero_field(u0.grid, u0.comps),
                                     detail::nonlinear_forcing(u_prev));
    for (int i = 0; i < residual.node_count(); ++i) {
      SpectralField node = u_prev.nodes[static_cast<std::size_t>(i)];
      node -= heat_propagate(u0, residual.time(i));
      node += residual.nodes[static_cast<std::size_t>(i)];
      residual.nodes[static_cast<std::size_t>(i)] = std::move(node);
    }
    const BlockNormTable res_table = build_block_table(residual, part, spec.p);
    const BlockNormTable sol_table = build_block_table(u_prev, part, spec.p);
    const double denom = chemin_lerner_norm(sol_table, inf, spec);
    diag.residual_rel =
        denom > 0.0 ? chemin_lerner_norm(res_table, inf, spec) / denom : 0.0;
  }

  result.solution = std::move(u_prev);
  return result;
}

/// Difference norms between the converged solutions from two data, in the
/// four spaces of the uniqueness and continuous-dependence arguments.
struct DifferenceReport {
  double n_inf = 0.0;  // L~^inf(B^s)
  double n_one = 0.0;  // L~^1(B^{s+2})
  double n_43 = 0.0;   // L~^{4/3}(B^{s+3/2})
  double n_4 = 0.0;    // L~^4(B^{s+1/2})
  IterationDiagnostics u_diagnostics;
  IterationDiagnostics v_diagnostics;
};

inline DifferenceReport self_difference_solve(const SpectralField& u0, const SpectralField& v0,
                                              double T, int M, int max_iter, double tol,
                                              const PicardConstants& constants,
                                              const BesovSpec& spec,
                                              DataMode mode = DataMode::lowcut) {
  PicardResult ru = picard_solve(u0, T, M, max_iter, tol, constants, spec, mode);
  PicardResult rv = picard_solve(v0, T, M, max_iter, tol, constants, spec, mode);
  const DyadicPartition part = build_partition(u0.grid);
  const BlockNormTable diff =
      build_difference_block_table(ru.solution, rv.solution, part, spec.p);
  DifferenceReport rep;
  BesovSpec b = spec;
  rep.n_inf = chemin_lerner_norm(diff, inf, b);
  b.s = spec.s + 2.0;
  rep.n_one = chemin_lerner_norm(diff, 1.0, b);
  b.s = spec.s + 1.5;
  rep.n_43 = chemin_lerner_norm(diff, 4.0 / 3.0, b);
  b.s = spec.s + 0.5;
  rep.n_4 = chemin_lerner_norm(diff, 4.0, b);
  rep.u_diagnostics = std::move(ru.diagnostics);
  rep.v_diagnostics = std::move(rv.diagnostics);
  return rep;
}

/// Norms ||e^{t Lap}u0 - u0||_{B^{s}_{p,r}} for each t in a list decreasing
/// to 0 (table used to witness right-continuity at t = 0).
inline std::vector<double> initial_continuity_check(const SpectralField& u0,
                                                    const BesovSpec& spec,
                                                    const std::vector<double>& t_list) {
  if (t_list.empty()) throw std::invalid_argument("initial_continuity_check: empty t list");
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] >= 0.0))
      throw std::invalid_argument("initial_continuity_check: negative t");
    if (i > 0 && !(t_list[i] < t_list[i - 1]))
      throw std::invalid_argument("initial_continuity_check: t list must decrease");
  }
  const DyadicPartition part = build_partition(u0.grid);
  std::vector<double> out;
  out.reserve(t_list.size());
  for (double t : t_list) {
    SpectralField diff = heat_propagate(u0, t);
    diff -= u0;
    out.push_back(besov_norm(diff, part, spec));
  }
  return out;
}

/// Sufficient step so the free flow moves the datum by less than eps in
/// B^{s}_{p,r} (finite r): delta = eps / (2 ||u0||^r 2^{2 r j0}).
inline double continuity_delta(double eps, double u0_norm, double r, int j0) {
  if (std::isinf(r)) throw std::invalid_argument("continuity_delta: requires finite r");
  if (!(eps > 0.0) || !(u0_norm > 0.0))
    throw std::invalid_argument("continuity_delta: eps and norm must be positive");
  return eps / (2.0 * std::pow(u0_norm, r) * std::exp2(2.0 * r * j0));
}

}  // namespace nsbesov
