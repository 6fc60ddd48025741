#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <nsbesov/besov.hpp>
#include <nsbesov/dyadic.hpp>
#include <nsbesov/field.hpp>
#include <nsbesov/heat.hpp>

namespace nsbesov {

/// Smallness parameter a for the fixed-point argument. The three-term form
/// min{1/(16 C1^2 E0), (sqrt(E0)/(4 C1))^{2/3}, 1/(4 C1)} is what the
/// contraction estimates invoke and is the value used downstream; the
/// two-term case-(2) variant min{1/(16 C1^2 E0), 4^{-4/3}/C1} is computed
/// alongside for comparison. In the global case E0 <= 1/(16 C1) the
/// parameter is a = 2 E0 instead.
struct SmallnessReport {
  double E0 = 0.0;
  double C1 = 0.0;
  double a_three_term = 0.0;
  double a_two_term = 0.0;
  bool global_case = false;
  double a = 0.0;  // 2 E0 when global, a_three_term otherwise
};

inline SmallnessReport small_constant_a(double E0, double C1) {
  if (!(E0 > 0.0) || !(C1 > 0.0))
    throw std::invalid_argument("small_constant_a: E0 and C1 must be positive");
  SmallnessReport rep;
  rep.E0 = E0;
  rep.C1 = C1;
  rep.a_three_term = std::min({1.0 / (16.0 * C1 * C1 * E0),
                               std::pow(std::sqrt(E0) / (4.0 * C1), 2.0 / 3.0),
                               1.0 / (4.0 * C1)});
  rep.a_two_term =
      std::min(1.0 / (16.0 * C1 * C1 * E0), 1.0 / (std::pow(4.0, 4.0 / 3.0) * C1));
  rep.global_case = E0 <= 1.0 / (16.0 * C1);
  rep.a = rep.global_case ? 2.0 * E0 : rep.a_three_term;
  return rep;
}

/// Existence-time lower bound from the datum's dyadic tail profile.
struct LifespanReport {
  double E0 = 0.0;
  double C1 = 0.0;
  double a = 0.0;
  bool global_branch = false;  // E0 <= 1/(16 C1): T is infinite
  int j0 = 0;                  // local branch only
  double T0 = 0.0;
  double T1 = 0.0;
  double T = 0.0;  // infinity marker in the global branch
  bool unresolved_tail_warning = false;
  // A-posteriori check ||e^{t Lap}u0||_A <= a on [0, T] (finite branch) or
  // on the probe horizon (global branch).
  double free_A_norm = 0.0;
  double free_check_horizon = 0.0;
  bool free_check_ok = false;
};

struct LifespanOptions {
  int check_M = 64;           // quadrature intervals for the a-posteriori check
  double global_probe_T = 10.0;
  int global_probe_M = 1024;
  bool do_free_check = true;
};

inline LifespanReport lifespan_T(const SpectralField& u0, const DyadicPartition& part,
                                 const BesovSpec& spec, double C1,
                                 const LifespanOptions& options = LifespanOptions{}) {
  LifespanReport rep;
  rep.C1 = C1;
  rep.E0 = besov_norm(u0, part, spec);
  if (!(rep.E0 > 0.0)) throw std::invalid_argument("lifespan_T: zero datum");
  const SmallnessReport small = small_constant_a(rep.E0, C1);
  rep.a = small.a;
  rep.global_branch = small.global_case;
  if (rep.global_branch) {
    rep.T = std::numeric_limits<double>::infinity();
    rep.free_check_horizon = options.global_probe_T;
    if (options.do_free_check) {
      rep.free_A_norm =
          free_evolution_A_norm(u0, options.global_probe_T, spec, options.global_probe_M, part);
      rep.free_check_ok = rep.free_A_norm <= rep.a * (1.0 + 1e-3);
    }
    return rep;
  }
  const J0Result j0res = smallest_j0(u0, part, spec, rep.a / 4.0);
  if (!j0res.certified) throw std::runtime_error("lifespan_T: unresolved tail");
  rep.j0 = j0res.j0;
  rep.unresolved_tail_warning = j0res.low_side_unwitnessed;
  const double pow2 = std::exp2(2.0 * rep.j0);
  rep.T0 = (rep.a / 4.0) / (pow2 * rep.E0);
  rep.T1 = (rep.a * rep.a / 16.0) / (pow2 * rep.E0 * rep.E0);
  rep.T = std::min(rep.T0, rep.T1);
  rep.free_check_horizon = rep.T;
  if (options.do_free_check) {
    rep.free_A_norm = free_evolution_A_norm(u0, rep.T, spec, options.check_M, part);
    rep.free_check_ok = rep.free_A_norm <= rep.a * (1.0 + 1e-3);
  }
  return rep;
}

inline LifespanReport lifespan_T(const SpectralField& u0, const BesovSpec& spec, double C1,
                                 const LifespanOptions& options = LifespanOptions{}) {
  return lifespan_T(u0, build_partition(u0.grid), spec, C1, options);
}

/// One row of the approximating-sequence construction.
struct JnRow {
  int n = 0;
  double dist = 0.0;    // ||u0^n - u0|| in the critical norm
  int m = 0;            // largest m with N_{eps/m} <= n (0 before N_eps)
  bool valid = false;   // n >= N_eps, so j0n is defined
  int j0n = 0;
  double tail_at_j0n = 0.0;  // tail of u0^n at j0n (checked < a/4)
};

struct JnSequenceReport {
  double a = 0.0;
  double epsilon = 0.0;  // a/8
  int j0_limit = 0;      // smallest_j0(u0, a/4)
  int N_eps = 0;         // first n with dist <= epsilon
  std::vector<int> N_per_m;   // N_{eps/m}, m = 1..m_max
  std::vector<int> jbar;      // jbar^m, m = 1..m_max
  std::vector<JnRow> rows;
  int stabilization_index = -1;  // first n from which j0n == j0_limit
  bool stabilized = false;
};

/// Builds j0^n for a data family u0^n -> u0: with eps = a/8, N_{eps/m} the
/// first index whose distance is <= eps/m and jbar^m the smallest j >= 0
/// with tail(u0, j) < a/4 - eps/m, each n >= N_eps gets j0n = jbar^{m(n)}
/// where m(n) is the deepest threshold reached. The proved strict bound
/// tail(u0^n, j0n) < a/4 is re-verified for every row.
inline JnSequenceReport construct_jn_sequence(const std::vector<SpectralField>& u0_seq,
                                              const SpectralField& u0,
                                              const DyadicPartition& part, const BesovSpec& spec,
                                              double C1) {
  if (u0_seq.empty()) throw std::invalid_argument("construct_jn_sequence: empty data list");
  const double E0 = besov_norm(u0, part, spec);
  const SmallnessReport small = small_constant_a(E0, C1);
  JnSequenceReport rep;
  rep.a = small.a;
  rep.epsilon = small.a / 8.0;

  std::vector<double> dist(u0_seq.size(), 0.0);
  for (std::size_t n = 0; n < u0_seq.size(); ++n) {
    SpectralField diff = u0_seq[n] - u0;
    dist[n] = besov_norm(diff, part, spec);
    if (n > 0 && dist[n] > dist[n - 1])
      throw std::invalid_argument("construct_jn_sequence: distances must be nonincreasing");
  }
  if (!(dist.back() <= rep.epsilon))
    throw std::runtime_error("construct_jn_sequence: insufficient convergence");

  const J0Result limit = smallest_j0(u0, part, spec, rep.a / 4.0);
  if (!limit.certified) throw std::runtime_error("construct_jn_sequence: unresolved tail");
  rep.j0_limit = limit.j0;

  // Thresholds eps/m, as deep as the data family witnesses. Since jbar^m is
  // nonincreasing in m and bounded below by the limit index, scanning stops
  // once that index is reached (deeper levels cannot move it); a fixed depth
  // cap guards data whose tail sits within rounding of a/4.
  constexpr int m_cap = 64;
  for (int m = 1; m <= m_cap; ++m) {
    const double thr = rep.epsilon / m;
    int first = -1;
    for (std::size_t n = 0; n < dist.size(); ++n)
      if (dist[n] <= thr) {
        first = static_cast<int>(n);
        break;
      }
    if (first < 0) break;
    const double tail_thr = rep.a / 4.0 - thr;
    const J0Result jr = smallest_j0(u0, part, spec, tail_thr);
    if (!jr.certified) throw std::runtime_error("construct_jn_sequence: unresolved tail");
    rep.N_per_m.push_back(first);
    rep.jbar.push_back(jr.j0);
    if (jr.j0 == rep.j0_limit) break;
  }
  rep.N_eps = rep.N_per_m.front();

  for (std::size_t n = 0; n < u0_seq.size(); ++n) {
    JnRow row;
    row.n = static_cast<int>(n);
    row.dist = dist[n];
    for (std::size_t m = 0; m < rep.N_per_m.size(); ++m)
      if (static_cast<int>(n) >= rep.N_per_m[m]) row.m = static_cast<int>(m) + 1;
    row.valid = row.m >= 1;
    if (row.valid) {
      row.j0n = rep.jbar[static_cast<std::size_t>(row.m) - 1];
      row.tail_at_j0n = tail_norm(u0_seq[n], part, spec, row.j0n);
      if (!(row.tail_at_j0n < rep.a / 4.0))
        throw std::runtime_error("construct_jn_sequence: tail violation");
    }
    rep.rows.push_back(row);
  }

  // First index from which the sequence sits at the limit value for good.
  for (std::size_t n = 0; n < rep.rows.size(); ++n) {
    bool all = true;
    for (std::size_t k = n; k < rep.rows.size(); ++k)
      if (!rep.rows[k].valid || rep.rows[k].j0n != rep.j0_limit) {
        all = false;
        break;
      }
    if (all) {
      rep.stabilization_index = static_cast<int>(n);
      rep.stabilized = true;
      break;
    }
  }
  return rep;
}

/// Per-datum lifespans along the family, sharing the constructed j0^n.
struct LifespanSequenceRow {
  int n = 0;
  bool valid = false;  // j0n defined (n >= N_eps)
  double E0n = 0.0;
  double an = 0.0;
  int j0n = 0;
  double T0n = 0.0;
  double T1n = 0.0;
  double Tn = 0.0;
};

struct LifespanSequenceReport {
  LifespanReport base;
  JnSequenceReport jn;
  std::vector<LifespanSequenceRow> rows;
  double T = 0.0;
  double sup_dev_beyond_Neps = 0.0;  // sup_{n >= N_eps} |Tn - T|
  double delta = 0.0;
  double common_horizon = 0.0;  // T - delta
};

inline LifespanSequenceReport lifespan_sequence(const std::vector<SpectralField>& u0_seq,
                                                const SpectralField& u0,
                                                const DyadicPartition& part,
                                                const BesovSpec& spec, double C1,
                                                double delta_frac = 0.1,
                                                const LifespanOptions& options = LifespanOptions{}) {
  if (!(delta_frac > 0.0 && delta_frac < 1.0))
    throw std::invalid_argument("lifespan_sequence: delta fraction must lie in (0,1)");
  LifespanSequenceReport rep;
  rep.base = lifespan_T(u0, part, spec, C1, options);
  if (rep.base.global_branch)
    throw std::invalid_argument("lifespan_sequence: base datum must be local-branch");
  rep.jn = construct_jn_sequence(u0_seq, u0, part, spec, C1);
  rep.T = rep.base.T;
  for (const JnRow& jrow : rep.jn.rows) {
    LifespanSequenceRow row;
    row.n = jrow.n;
    row.valid = jrow.valid;
    row.E0n = besov_norm(u0_seq[static_cast<std::size_t>(jrow.n)], part, spec);
    row.an = small_constant_a(row.E0n, C1).a;
    if (row.valid) {
      row.j0n = jrow.j0n;
      const double pow2 = std::exp2(2.0 * row.j0n);
      row.T0n = (row.an / 4.0) / (pow2 * row.E0n);
      row.T1n = (row.an * row.an / 16.0) / (pow2 * row.E0n * row.E0n);
      row.Tn = std::min(row.T0n, row.T1n);
      rep.sup_dev_beyond_Neps = std::max(rep.sup_dev_beyond_Neps, std::abs(row.Tn - rep.T));
    }
    rep.rows.push_back(row);
  }
  rep.delta = delta_frac * rep.T;
  rep.common_horizon = rep.T - rep.delta;
  return rep;
}

}  // namespace nsbesov
