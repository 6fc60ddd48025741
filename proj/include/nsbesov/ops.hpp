#pragma once

#include <cmath>
#include <stdexcept>

#include "field.hpp"

namespace nsbesov {

/// Gradient: comps -> comps*d, component c*d + a holds d/dx_a of component c
/// (so for a velocity field the entry (i,a) = d_a u_i matches the tensor
/// layout used by tensor_product and divergence).
inline SpectralField gradient(const SpectralField& f) {
  const Grid& g = f.grid;
  SpectralField out(g, f.comps * g.d);
  for (std::size_t i = 0; i < f.modes(); ++i) {
    std::array<int, 3> k = g.freqs(i);
    for (int c = 0; c < f.comps; ++c) {
      cplx v = f.coef[c][i];
      for (int a = 0; a < g.d; ++a) {
        double xi = k[a] / g.box;
        out.coef[c * g.d + a][i] = cplx{0.0, xi} * v;
      }
    }
  }
  return out;
}

/// Divergence. For a d-vector returns the scalar sum_a d_a f_a; for a rank-2
/// tensor T (comps = d*d, entry (i,j) at i*d+j) returns the vector with
/// components sum_j d_j T_ij.
inline SpectralField divergence(const SpectralField& f) {
  const Grid& g = f.grid;
  if (f.comps == g.d) {
    SpectralField out(g, 1);
    for (std::size_t i = 0; i < f.modes(); ++i) {
      std::array<int, 3> k = g.freqs(i);
      cplx s{0.0, 0.0};
      for (int a = 0; a < g.d; ++a) s += cplx{0.0, k[a] / g.box} * f.coef[a][i];
      out.coef[0][i] = s;
    }
    return out;
  }
  if (f.comps == g.d * g.d) {
    SpectralField out(g, g.d);
    for (std::size_t i = 0; i < f.modes(); ++i) {
      std::array<int, 3> k = g.freqs(i);
      for (int c = 0; c < g.d; ++c) {
        cplx s{0.0, 0.0};
        for (int a = 0; a < g.d; ++a) s += cplx{0.0, k[a] / g.box} * f.coef[c * g.d + a][i];
        out.coef[c][i] = s;
      }
    }
    return out;
  }
  throw std::invalid_argument("divergence: expects a d-vector or d*d-tensor field");
}

inline SpectralField laplacian(const SpectralField& f) {
  const Grid& g = f.grid;
  SpectralField out(g, f.comps);
  for (std::size_t i = 0; i < f.modes(); ++i) {
    double xs = g.xi_sq(g.freqs(i));
    for (int c = 0; c < f.comps; ++c) out.coef[c][i] = -xs * f.coef[c][i];
  }
  return out;
}

/// Leray projector onto divergence-free fields: per mode
/// uhat <- uhat - k (k . uhat)/|k|^2. The zero mode is untouched (it is zero
/// for mean-free data). Idempotent and self-adjoint.
inline void leray_project(SpectralField& u) {
  const Grid& g = u.grid;
  if (u.comps != g.d) throw std::invalid_argument("leray_project: expects a d-vector field");
  for (std::size_t i = 0; i < u.modes(); ++i) {
    std::array<int, 3> k = g.freqs(i);
    std::int64_t ks = g.ksq(k);
    if (ks == 0) continue;
    cplx dot{0.0, 0.0};
    for (int a = 0; a < g.d; ++a) dot += static_cast<double>(k[a]) * u.coef[a][i];
    dot /= static_cast<double>(ks);
    for (int a = 0; a < g.d; ++a) u.coef[a][i] -= static_cast<double>(k[a]) * dot;
  }
}

inline SpectralField leray_projected(SpectralField u) {
  leray_project(u);
  return u;
}

/// Largest |k . uhat(k)|/|k| over modes — the divergence residual scale.
inline double divergence_defect(const SpectralField& u) {
  const Grid& g = u.grid;
  double m = 0.0;
  for (std::size_t i = 0; i < u.modes(); ++i) {
    std::array<int, 3> k = g.freqs(i);
    std::int64_t ks = g.ksq(k);
    if (ks == 0) continue;
    cplx dot{0.0, 0.0};
    for (int a = 0; a < g.d; ++a) dot += static_cast<double>(k[a]) * u.coef[a][i];
    m = std::max(m, std::abs(dot) / std::sqrt(static_cast<double>(ks)));
  }
  return m;
}

/// Pointwise tensor product computed in physical space and dealiased:
/// component (cu, cv) of the result at index cu*v.comps + cv equals
/// (u_cu * v_cv). For two d-vectors this is u (x) v with (i,j) at i*d+j.
inline SpectralField tensor_product(const SpectralField& u, const SpectralField& v) {
  if (u.grid != v.grid) throw std::invalid_argument("tensor_product: grid mismatch");
  PhysicalField pu = transform_to_physical(u);
  PhysicalField pv = transform_to_physical(v);
  PhysicalField pw(u.grid, u.comps * v.comps);
  const std::size_t m = u.grid.size();
  for (int cu = 0; cu < u.comps; ++cu)
    for (int cv = 0; cv < v.comps; ++cv) {
      double* w = pw.val[cu * v.comps + cv].data();
      const double* a = pu.val[cu].data();
      const double* b = pv.val[cv].data();
      for (std::size_t i = 0; i < m; ++i) w[i] = a[i] * b[i];
    }
  SpectralField out = transform_to_spectral(pw);
  dealias(out);
  return out;
}

/// Convective term (u . grad)u = div(u (x) u) for divergence-free u,
/// dealiased.
inline SpectralField convective_term(const SpectralField& u) {
  return divergence(tensor_product(u, u));
}

/// Projected Navier-Stokes nonlinearity P div(u (x) u).
inline SpectralField projected_nonlinearity(const SpectralField& u) {
  SpectralField n = convective_term(u);
  leray_project(n);
  return n;
}

/// Pressure recovered from the velocity by solving -Lap P = div(u . grad u)
/// spectrally; the zero mode is set to 0 (zero-mean normalization).
inline SpectralField recover_pressure(const SpectralField& u) {
  const Grid& g = u.grid;
  if (u.comps != g.d) throw std::invalid_argument("recover_pressure: expects a d-vector field");
  SpectralField rhs = divergence(convective_term(u));  // div(u . grad u), scalar
  SpectralField p(g, 1);
  for (std::size_t i = 0; i < p.modes(); ++i) {
    double xs = g.xi_sq(g.freqs(i));
    p.coef[0][i] = (xs == 0.0) ? cplx{0.0, 0.0} : rhs.coef[0][i] / xs;
  }
  return p;
}

}  // namespace nsbesov
