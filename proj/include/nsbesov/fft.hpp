#pragma once

#include <complex>
#include <map>
#include <tuple>

#include <fftw3.h>

#include "grid.hpp"

namespace nsbesov::detail {

/// Process-wide FFTW plan cache. Plans are created with
/// FFTW_ESTIMATE | FFTW_UNALIGNED: planning is heuristic (no timing runs), so
/// repeated executions of the same binary pick identical plans and transforms
/// stay bit-reproducible; UNALIGNED lets one plan serve any buffer.
/// Single-threaded use only.
inline fftw_plan plan_for(const Grid& g, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  auto key = std::make_tuple(g.d, g.n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  int dims[3] = {g.n, g.n, g.n};
  // Dummy buffer for planning; execution uses fftw_execute_dft on user data.
  fftw_complex* buf = fftw_alloc_complex(g.size());
  fftw_plan p = fftw_plan_dft(g.d, dims, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  cache.emplace(key, p);
  return p;
}

/// Physical samples -> Fourier-series coefficients (divides by n^d so that a
/// single mode exp(i x . k/L) has coefficient 1 at k).
inline void fft_forward_inplace(const Grid& g, std::complex<double>* data) {
  fftw_plan p = plan_for(g, FFTW_FORWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
  const double scale = 1.0 / static_cast<double>(g.size());
  const std::size_t m = g.size();
  for (std::size_t i = 0; i < m; ++i) data[i] *= scale;
}

/// Fourier-series coefficients -> physical samples (plain exponential sum).
inline void fft_backward_inplace(const Grid& g, std::complex<double>* data) {
  fftw_plan p = plan_for(g, FFTW_BACKWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
}

}  // namespace nsbesov::detail
