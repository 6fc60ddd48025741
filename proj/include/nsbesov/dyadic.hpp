#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "field.hpp"

namespace nsbesov {

/// Radial bump machinery for the dyadic partition of unity.
///
/// chi is radial, identically 1 on |xi| <= 3/4, identically 0 on |xi| >= 4/3,
/// with the smooth monotone transition h(s) = b(s)/(b(s) + b(1-s)),
/// b(t) = exp(-1/t) for t > 0 (0 otherwise), applied to the normalized shell
/// coordinate. phi(xi) = chi(xi/2) - chi(xi) is then supported in the annulus
/// 3/4 <= |xi| <= 8/3, and the dilates phi(2^-j xi) telescope:
///   sum_{j=a..b} phi(2^-j xi) = chi(2^-(b+1) xi) - chi(2^-a xi).
namespace cutoff {

inline double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

inline double transition(double s) {  // 0 at s<=0, 1 at s>=1, smooth monotone
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double b0 = bump(s);
  double b1 = bump(1.0 - s);
  return b0 / (b0 + b1);
}

inline double chi(double r) {
  constexpr double lo = 0.75;
  constexpr double hi = 4.0 / 3.0;
  if (r <= lo) return 1.0;
  if (r >= hi) return 0.0;
  return 1.0 - transition((r - lo) / (hi - lo));
}

inline double phi(double r) { return chi(0.5 * r) - chi(r); }

}  // namespace cutoff

/// Dyadic Littlewood-Paley partition sampled on a grid's frequency lattice.
///
/// Annulus j carries the multiplier phi(2^-j xi) with xi = k/L. The resolved
/// range [j_min, j_max] includes every j whose annulus
/// (3/4 * 2^j, 8/3 * 2^j) intersects the representable band
/// [1/L, n/(3L)] (lowest nonzero lattice frequency up to the dealias cut).
///
/// Guaranteed on the lattice (see tests):
///  * sum_j phi(2^-j xi) = 1 on the guarded band,
///  * 1/2 <= sum_j phi(2^-j xi)^2 <= 1 there,
///  * supports of blocks j, j' are disjoint whenever |j - j'| >= 2.
struct DyadicPartition {
  Grid grid;
  int j_min = 0;
  int j_max = -1;
  std::vector<std::vector<double>> phi;  ///< [j - j_min][flat mode]
  std::vector<double> xi_abs;            ///< |xi| per mode

  int count() const { return j_max - j_min + 1; }
  bool resolved(int j) const { return j >= j_min && j <= j_max; }
  const std::vector<double>& multiplier(int j) const { return phi[static_cast<std::size_t>(j - j_min)]; }

  /// Frequencies whose whole dyadic neighbourhood is resolved, so the
  /// truncated partition identities hold there: the telescoped sum equals 1
  /// exactly for 4/3 * 2^j_min <= |xi| <= 3/2 * 2^j_max. Every nonzero
  /// lattice frequency inside the dealias cut satisfies this by the choice
  /// of [j_min, j_max].
  bool guarded(std::size_t flat) const {
    double r = xi_abs[flat];
    if (r == 0.0) return false;
    if (!grid.dealias_keep(grid.freqs(flat))) return false;
    return r >= (4.0 / 3.0) * std::exp2(j_min) && r <= 1.5 * std::exp2(j_max);
  }
};

inline DyadicPartition build_partition(const Grid& g) {
  DyadicPartition part;
  part.grid = g;

  const double band_lo = 1.0 / g.box;
  const double band_hi = g.dealias_radius();
  // annulus j intersects [band_lo, band_hi] iff 3/4*2^j <= band_hi and
  // 8/3*2^j >= band_lo
  int jmin = 0, jmax = -1;
  bool seen = false;
  for (int j = -64; j <= 64; ++j) {
    bool hit = 0.75 * std::exp2(j) <= band_hi && (8.0 / 3.0) * std::exp2(j) >= band_lo;
    if (hit && !seen) {
      jmin = j;
      seen = true;
    }
    if (hit) jmax = j;
  }
  if (!seen) throw std::runtime_error("build_partition: no resolvable annulus on this grid");
  part.j_min = jmin;
  part.j_max = jmax;

  const std::size_t m = g.size();
  part.xi_abs.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    part.xi_abs[i] = std::sqrt(static_cast<double>(g.ksq(g.freqs(i)))) / g.box;

  part.phi.assign(static_cast<std::size_t>(part.count()), std::vector<double>(m));
  for (int j = jmin; j <= jmax; ++j) {
    std::vector<double>& row = part.phi[static_cast<std::size_t>(j - jmin)];
    const double scale = std::exp2(-j);
    for (std::size_t i = 0; i < m; ++i) row[i] = cutoff::phi(part.xi_abs[i] * scale);
  }
  return part;
}

/// Littlewood-Paley block: multiplies by phi(2^-j xi). Unresolved j gives the
/// zero field (the annulus has no lattice support).
inline SpectralField block(const SpectralField& f, const DyadicPartition& part, int j) {
  if (f.grid != part.grid) throw std::invalid_argument("block: partition built for another grid");
  SpectralField out(f.grid, f.comps);
  if (!part.resolved(j)) return out;
  const std::vector<double>& mult = part.multiplier(j);
  for (int c = 0; c < f.comps; ++c)
    for (std::size_t i = 0; i < f.modes(); ++i) out.coef[c][i] = mult[i] * f.coef[c][i];
  return out;
}

/// Low-frequency cut S_j = sum_{k < j} block_k over the resolved range.
/// By telescoping the multiplier equals chi(2^-j xi) on the guarded band.
inline SpectralField low_cut(const SpectralField& f, const DyadicPartition& part, int j) {
  if (f.grid != part.grid) throw std::invalid_argument("low_cut: partition built for another grid");
  SpectralField out(f.grid, f.comps);
  const int hi = std::min(j - 1, part.j_max);
  if (hi < part.j_min) return out;
  std::vector<double> mult(f.modes(), 0.0);
  for (int k = part.j_min; k <= hi; ++k) {
    const std::vector<double>& row = part.multiplier(k);
    for (std::size_t i = 0; i < f.modes(); ++i) mult[i] += row[i];
  }
  for (int c = 0; c < f.comps; ++c)
    for (std::size_t i = 0; i < f.modes(); ++i) out.coef[c][i] = mult[i] * f.coef[c][i];
  return out;
}

/// True when S_j captures every resolved block, i.e. low_cut(f, j) acts as
/// the identity on dealiased mean-free fields.
inline bool low_cut_saturated(const DyadicPartition& part, int j) { return j - 1 >= part.j_max; }

}  // namespace nsbesov
