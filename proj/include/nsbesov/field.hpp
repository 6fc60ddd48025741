#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fft.hpp"
#include "grid.hpp"

namespace nsbesov {

using cplx = std::complex<double>;

/// Multi-component field stored as Fourier-series coefficients on the grid's
/// frequency lattice. comps = 1 for scalars, d for velocity fields, d*d for
/// rank-2 tensors (component (i,j) of u (x) v lives at index i*d + j).
struct SpectralField {
  Grid grid;
  int comps = 0;
  std::vector<std::vector<cplx>> coef;  ///< [comp][flat mode index]

  SpectralField() = default;
  SpectralField(const Grid& g, int c)
      : grid(g), comps(c), coef(static_cast<std::size_t>(c), std::vector<cplx>(g.size())) {}

  std::size_t modes() const { return grid.size(); }

  SpectralField& operator+=(const SpectralField& o) {
    require_compatible(o);
    for (int c = 0; c < comps; ++c)
      for (std::size_t i = 0; i < modes(); ++i) coef[c][i] += o.coef[c][i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_compatible(o);
    for (int c = 0; c < comps; ++c)
      for (std::size_t i = 0; i < modes(); ++i) coef[c][i] -= o.coef[c][i];
    return *this;
  }
  SpectralField& operator*=(double s) {
    for (int c = 0; c < comps; ++c)
      for (std::size_t i = 0; i < modes(); ++i) coef[c][i] *= s;
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  void require_compatible(const SpectralField& o) const {
    if (grid != o.grid || comps != o.comps)
      throw std::invalid_argument("SpectralField: incompatible grid or component count");
  }

  /// Adds a mode and its Hermitian partner so the field stays real-valued.
  void add_real_mode(int comp, const std::array<int, 3>& k, cplx amplitude) {
    std::size_t i = grid.index(k);
    coef[comp][i] += amplitude;
    std::size_t j = grid.conj_index(i);
    if (j != i) coef[comp][j] += std::conj(amplitude);
  }

  void set_zero_mean() {
    for (int c = 0; c < comps; ++c) coef[c][0] = cplx{0.0, 0.0};
  }

  double max_abs_coef() const {
    double m = 0.0;
    for (int c = 0; c < comps; ++c)
      for (std::size_t i = 0; i < modes(); ++i) m = std::max(m, std::abs(coef[c][i]));
    return m;
  }
};

inline SpectralField zero_field(const Grid& g, int comps) { return SpectralField(g, comps); }

/// Real-valued samples on the physical grid, same storage order as the
/// spectral lattice (row major over axes).
struct PhysicalField {
  Grid grid;
  int comps = 0;
  std::vector<std::vector<double>> val;

  PhysicalField() = default;
  PhysicalField(const Grid& g, int c)
      : grid(g), comps(c), val(static_cast<std::size_t>(c), std::vector<double>(g.size())) {}
};

/// Largest deviation from Hermitian symmetry fhat(-k) = conj(fhat(k)).
inline double hermitian_defect(const SpectralField& f) {
  double m = 0.0;
  for (int c = 0; c < f.comps; ++c)
    for (std::size_t i = 0; i < f.modes(); ++i) {
      std::size_t j = f.grid.conj_index(i);
      m = std::max(m, std::abs(f.coef[c][i] - std::conj(f.coef[c][j])));
    }
  return m;
}

/// Projects onto the Hermitian-symmetric part (real-valued fields).
inline void hermitian_symmetrize(SpectralField& f) {
  for (int c = 0; c < f.comps; ++c) {
    std::vector<cplx>& a = f.coef[c];
    for (std::size_t i = 0; i < f.modes(); ++i) {
      std::size_t j = f.grid.conj_index(i);
      if (j < i) continue;
      cplx half = 0.5 * (a[i] + std::conj(a[j]));
      a[i] = half;
      a[j] = std::conj(half);
    }
  }
}

/// Applies the 2/3-rule mask in place.
inline void dealias(SpectralField& f) {
  const Grid& g = f.grid;
  for (std::size_t i = 0; i < f.modes(); ++i) {
    if (!g.dealias_keep(g.freqs(i)))
      for (int c = 0; c < f.comps; ++c) f.coef[c][i] = cplx{0.0, 0.0};
  }
}

inline SpectralField dealiased(SpectralField f) {
  dealias(f);
  return f;
}

/// Largest coefficient magnitude outside the dealias ball.
inline double dealias_defect(const SpectralField& f) {
  const Grid& g = f.grid;
  double m = 0.0;
  for (std::size_t i = 0; i < f.modes(); ++i) {
    if (!g.dealias_keep(g.freqs(i)))
      for (int c = 0; c < f.comps; ++c) m = std::max(m, std::abs(f.coef[c][i]));
  }
  return m;
}

inline PhysicalField transform_to_physical(const SpectralField& f) {
  PhysicalField out(f.grid, f.comps);
  std::vector<cplx> buf(f.modes());
  for (int c = 0; c < f.comps; ++c) {
    buf = f.coef[c];
    detail::fft_backward_inplace(f.grid, buf.data());
    for (std::size_t i = 0; i < f.modes(); ++i) out.val[c][i] = buf[i].real();
  }
  return out;
}

inline SpectralField transform_to_spectral(const PhysicalField& p) {
  SpectralField out(p.grid, p.comps);
  std::vector<cplx> buf(out.modes());
  for (int c = 0; c < p.comps; ++c) {
    for (std::size_t i = 0; i < out.modes(); ++i) buf[i] = cplx{p.val[c][i], 0.0};
    detail::fft_forward_inplace(p.grid, buf.data());
    out.coef[c] = buf;
  }
  return out;
}

/// L^p norm (1 <= p < infinity) of the pointwise Euclidean magnitude, by the
/// grid quadrature sum(|f(x_m)|^p) * cell_volume, accumulated in flat storage
/// order so results are bit-reproducible.
inline double lp_norm(const SpectralField& f, double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lp_norm: p must lie in [1, infinity)");
  PhysicalField ph = transform_to_physical(f);
  const std::size_t m = f.modes();
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (int c = 0; c < f.comps; ++c) {
      double v = ph.val[c][i];
      s += v * v;
    }
    if (p == 2.0) {
      acc += s;
    } else {
      double mag = std::sqrt(s);
      acc += (p == 1.0) ? mag : std::pow(mag, p);
    }
  }
  acc *= f.grid.cell_volume();
  if (p == 2.0) return std::sqrt(acc);
  if (p == 1.0) return acc;
  return std::pow(acc, 1.0 / p);
}

/// L^2 norm through Parseval (orthogonality of the Fourier modes); used for
/// fast internal checks, the lp_norm contract above is the quadrature one.
inline double l2_norm_spectral(const SpectralField& f) {
  double acc = 0.0;
  for (int c = 0; c < f.comps; ++c)
    for (std::size_t i = 0; i < f.modes(); ++i) acc += std::norm(f.coef[c][i]);
  return std::sqrt(acc * f.grid.volume());
}

/// Spectral inner product <f, g> = volume * sum_k conj(fhat) . ghat (real part).
inline double inner_product(const SpectralField& f, const SpectralField& g) {
  f.require_compatible(g);
  double acc = 0.0;
  for (int c = 0; c < f.comps; ++c)
    for (std::size_t i = 0; i < f.modes(); ++i)
      acc += (std::conj(f.coef[c][i]) * g.coef[c][i]).real();
  return acc * f.grid.volume();
}

}  // namespace nsbesov
