#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include <nsbesov/besov.hpp>
#include <nsbesov/dyadic.hpp>
#include <nsbesov/field.hpp>
#include <nsbesov/grid.hpp>
#include <nsbesov/ops.hpp>
#include <nsbesov/rng.hpp>

namespace nsbesov {

/// Taylor-Green vortex at the fundamental wavenumber, divergence-free and
/// mean-free by construction (third component zero in 3d).
inline SpectralField taylor_green(const Grid& g, double amplitude) {
  PhysicalField ph(g, g.d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::size_t rem = i;
    std::array<int, 3> m{0, 0, 0};
    for (int a = g.d - 1; a >= 0; --a) {
      m[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(g.n));
      rem /= static_cast<std::size_t>(g.n);
    }
    const double x = 2.0 * pi * m[0] / g.n;
    const double y = 2.0 * pi * m[1] / g.n;
    const double cz = (g.d == 3) ? std::cos(2.0 * pi * m[2] / g.n) : 1.0;
    ph.val[0][i] = amplitude * std::sin(x) * std::cos(y) * cz;
    ph.val[1][i] = -amplitude * std::cos(x) * std::sin(y) * cz;
  }
  SpectralField f = transform_to_spectral(ph);
  dealias(f);
  f.set_zero_mean();
  // The analytic spectrum holds a handful of equal-magnitude modes; drop
  // transform rounding so the datum is exactly band-limited.
  double peak = 0.0;
  for (int c = 0; c < f.comps; ++c)
    for (const cplx& v : f.coef[c]) peak = std::max(peak, std::abs(v));
  for (int c = 0; c < f.comps; ++c)
    for (cplx& v : f.coef[c])
      if (std::abs(v) <= 1e-12 * peak) v = cplx{0.0, 0.0};
  return f;
}

/// Divergence-free Gaussian field with |u^(xi)| ~ |xi|^slope: conjugate pairs
/// are drawn once in flat index order (canonical member i < conj_index(i)),
/// self-conjugate modes get real draws, then the field is Leray-projected,
/// dealiased, and mean-free. Bit-identical for a fixed seed.
inline SpectralField gen_divfree_random(unsigned long long seed, double slope, const Grid& g) {
  Rng rng(seed);
  SpectralField f(g, g.d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::array<int, 3> k = g.freqs(i);
    if (!g.dealias_keep(k)) continue;
    const double r2 = g.xi_sq(k);
    if (r2 == 0.0) continue;
    const std::size_t j = g.conj_index(i);
    if (j < i) continue;
    const double mag = std::pow(std::sqrt(r2), slope);
    for (int c = 0; c < g.d; ++c) {
      if (j == i) {
        f.coef[c][i] = cplx{mag * rng.normal(), 0.0};
      } else {
        const cplx z{rng.normal(), rng.normal()};
        f.coef[c][i] = mag * z / std::sqrt(2.0);
        f.coef[c][j] = std::conj(f.coef[c][i]);
      }
    }
  }
  leray_project(f);
  dealias(f);
  f.set_zero_mean();
  return f;
}

/// Deterministic divergence-free field supported exactly on the modes seen
/// only by dyadic block j (radii strictly between (4/3) 2^j and (3/2) 2^j,
/// where the block multiplier equals 1): every such conjugate pair gets a
/// unit tangential coefficient. Throws if the shell holds no lattice mode.
inline SpectralField gen_pure_shell(const Grid& g, int j) {
  const double lo = g.box * (4.0 / 3.0) * std::exp2(static_cast<double>(j));
  const double hi = g.box * 1.5 * std::exp2(static_cast<double>(j));
  SpectralField f(g, g.d);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::array<int, 3> k = g.freqs(i);
    if (!g.dealias_keep(k)) continue;
    const double r2 = static_cast<double>(g.ksq(k));
    if (!(lo * lo < r2 && r2 < hi * hi)) continue;
    if (g.conj_index(i) <= i) continue;
    std::array<double, 3> t{0.0, 0.0, 0.0};
    if (g.d == 2) {
      t = {-static_cast<double>(k[1]), static_cast<double>(k[0]), 0.0};
    } else {
      int axis = 0;
      for (int a = 1; a < 3; ++a)
        if (std::abs(k[static_cast<std::size_t>(a)]) < std::abs(k[static_cast<std::size_t>(axis)]))
          axis = a;
      std::array<double, 3> e{0.0, 0.0, 0.0};
      e[static_cast<std::size_t>(axis)] = 1.0;
      t = {static_cast<double>(k[1]) * e[2] - static_cast<double>(k[2]) * e[1],
           static_cast<double>(k[2]) * e[0] - static_cast<double>(k[0]) * e[2],
           static_cast<double>(k[0]) * e[1] - static_cast<double>(k[1]) * e[0]};
    }
    double norm = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
    for (int c = 0; c < g.d; ++c)
      f.add_real_mode(c, k, cplx{t[static_cast<std::size_t>(c)] / norm, 0.0});
    ++hits;
  }
  if (hits == 0) throw std::invalid_argument("gen_pure_shell: shell holds no lattice mode");
  return f;
}

/// Rescales f so its Lp norm equals target; returns the applied factor.
inline double normalize_lp(SpectralField& f, double p, double target) {
  const double cur = lp_norm(f, p);
  if (!(cur > 0.0)) throw std::invalid_argument("normalize_lp: zero field");
  const double factor = target / cur;
  f *= factor;
  return factor;
}

/// Rescales f so its spectral L2 norm equals target; returns the factor.
inline double normalize_l2(SpectralField& f, double target) {
  const double cur = l2_norm_spectral(f);
  if (!(cur > 0.0)) throw std::invalid_argument("normalize_l2: zero field");
  const double factor = target / cur;
  f *= factor;
  return factor;
}

/// Rescales f so its Besov norm equals target; returns the factor.
inline double normalize_besov(SpectralField& f, const DyadicPartition& part,
                              const BesovSpec& spec, double target) {
  const double cur = besov_norm(f, part, spec);
  if (!(cur > 0.0)) throw std::invalid_argument("normalize_besov: zero field");
  const double factor = target / cur;
  f *= factor;
  return factor;
}

/// Comparison pair: u0 = 2^{N(d/p-1)} phi at block 0 versus v0 = phi shifted
/// N dyadic steps, with phi the Taylor-Green profile normalized to unit Lp
/// norm. Both are divergence-free and mean-free with equal critical Besov
/// norms (the dyadic rewrap preserves every Lp norm), while the smallest
/// certifying tail indices differ by N.
struct ScaledPair {
  SpectralField u0;
  SpectralField v0;
};

inline ScaledPair gen_scaled_pair(int N, double p, int d, const Grid& g) {
  if (g.d != d) throw std::invalid_argument("gen_scaled_pair: grid dimension mismatch");
  const double s = static_cast<double>(d) / p - 1.0;
  if (!(s > 0.0)) throw std::invalid_argument("gen_scaled_pair: requires d/p - 1 > 0");
  if (N < 0) throw std::invalid_argument("gen_scaled_pair: N out of resolved range");
  const DyadicPartition part = build_partition(g);
  if (N + 1 > part.j_max) throw std::invalid_argument("gen_scaled_pair: N out of resolved range");
  SpectralField phi = taylor_green(g, 1.0);
  normalize_lp(phi, p, 1.0);
  ScaledPair pair;
  pair.u0 = std::exp2(static_cast<double>(N) * s) * phi;
  pair.v0 = dyadic_shift(phi, N, 1.0);
  return pair;
}

}  // namespace nsbesov
