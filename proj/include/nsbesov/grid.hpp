#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsbesov {

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Uniform periodic grid on the d-torus of side length 2*pi*L.
///
/// Physical sample points are x_m = 2*pi*L*m/n per axis, m = 0..n-1.
/// Spectral coefficients live on the integer lattice k in [-n/2, n/2)^d and
/// represent physical frequencies xi = k/L: a field is
///     f(x) = sum_k fhat(k) exp(i x . k/L).
/// In memory each axis is kept in FFT wraparound order
/// (0, 1, ..., n/2-1, -n/2, ..., -1), row major across axes.
struct Grid {
  int d = 0;
  int n = 0;
  double box = 1.0;  ///< L; the torus has side 2*pi*L

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n);
    return s;
  }

  double spacing() const { return 2.0 * pi * box / n; }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < d; ++a) v *= spacing();
    return v;
  }
  double volume() const {
    double v = 1.0;
    for (int a = 0; a < d; ++a) v *= 2.0 * pi * box;
    return v;
  }

  /// Integer frequency of a single-axis storage index.
  int axis_freq(int idx) const { return idx < n / 2 ? idx : idx - n; }
  /// Storage index of a single-axis integer frequency in [-n/2, n/2).
  int axis_index(int k) const { return k >= 0 ? k : k + n; }

  /// Decode a flat storage index into integer frequencies (unused axes 0).
  std::array<int, 3> freqs(std::size_t flat) const {
    std::array<int, 3> k{0, 0, 0};
    for (int a = d - 1; a >= 0; --a) {
      k[a] = axis_freq(static_cast<int>(flat % n));
      flat /= n;
    }
    return k;
  }

  /// Flat storage index of an integer frequency vector.
  std::size_t index(const std::array<int, 3>& k) const {
    std::size_t flat = 0;
    for (int a = 0; a < d; ++a) flat = flat * n + static_cast<std::size_t>(axis_index(k[a]));
    return flat;
  }

  /// Flat index of the Hermitian partner -k (mod n per axis).
  std::size_t conj_index(std::size_t flat) const {
    std::array<int, 3> k = freqs(flat);
    std::array<int, 3> m{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      int neg = -k[a];
      if (neg == n / 2) neg = -n / 2;  // -(-n/2) aliases back to -n/2
      m[a] = neg;
    }
    return index(m);
  }

  /// |k|^2 as an exact integer.
  std::int64_t ksq(const std::array<int, 3>& k) const {
    std::int64_t s = 0;
    for (int a = 0; a < d; ++a) s += static_cast<std::int64_t>(k[a]) * k[a];
    return s;
  }

  /// |xi|^2 = |k|^2 / L^2.
  double xi_sq(const std::array<int, 3>& k) const {
    return static_cast<double>(ksq(k)) / (box * box);
  }

  /// 2/3-rule mask: keep |xi| <= n/(3L), i.e. 9|k|^2 <= n^2. For n a power of
  /// two the boundary has no lattice points, so products of kept modes alias
  /// only onto discarded ones.
  bool dealias_keep(const std::array<int, 3>& k) const {
    return 9 * ksq(k) <= static_cast<std::int64_t>(n) * n;
  }

  /// Highest represented physical frequency after the dealias cut.
  double dealias_radius() const { return n / (3.0 * box); }

  bool operator==(const Grid& o) const { return d == o.d && n == o.n && box == o.box; }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline Grid make_grid(int d, int n, double box_size) {
  if (d != 2 && d != 3) throw std::invalid_argument("make_grid: d must be 2 or 3");
  if (!is_power_of_two(n) || n < 16)
    throw std::invalid_argument("make_grid: n must be a power of two >= 16");
  if (!(box_size > 0.0) || !std::isfinite(box_size))
    throw std::invalid_argument("make_grid: box_size must be positive and finite");
  return Grid{d, n, box_size};
}

}  // namespace nsbesov
