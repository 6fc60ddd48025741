#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "field.hpp"

namespace nsbesov {

/// NSBF snapshot format, version 1. Little-endian throughout:
///   bytes 0..3   magic "NSBF"
///   u32          version (= 1)
///   u32          d
///   u32          n
///   f64          box_size
///   then d coefficient arrays (one per velocity component), each laid out
///   row-major over the axes with every axis in ascending frequency order
///   -n/2 ... n/2-1, one coefficient = two f64 (re, im).
/// Round-trips are bit-identical.
namespace detail_nsbf {

static_assert(std::endian::native == std::endian::little,
              "NSBF I/O assumes a little-endian host");

inline void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}
inline void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), 8);
}
inline std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
inline double get_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

/// Flat storage index corresponding to file position `pos` (row-major over
/// axes, each axis ascending from -n/2).
inline std::size_t storage_index_of_file_pos(const Grid& g, std::size_t pos) {
  std::size_t flat = 0;
  std::size_t rem = pos;
  std::size_t stride = 1;
  for (int a = 0; a < g.d - 1; ++a) stride *= g.n;
  for (int a = 0; a < g.d; ++a) {
    int ascending = static_cast<int>(rem / stride);
    rem %= stride;
    int k = ascending - g.n / 2;
    flat = flat * g.n + static_cast<std::size_t>(g.axis_index(k));
    stride /= g.n;
  }
  return flat;
}

}  // namespace detail_nsbf

inline void save_snapshot(const std::string& path, const SpectralField& u) {
  if (u.comps != u.grid.d)
    throw std::invalid_argument("save_snapshot: expects a d-vector velocity field");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_snapshot: cannot open " + path);
  os.write("NSBF", 4);
  detail_nsbf::put_u32(os, 1u);
  detail_nsbf::put_u32(os, static_cast<std::uint32_t>(u.grid.d));
  detail_nsbf::put_u32(os, static_cast<std::uint32_t>(u.grid.n));
  detail_nsbf::put_f64(os, u.grid.box);
  const std::size_t m = u.modes();
  for (int c = 0; c < u.comps; ++c)
    for (std::size_t pos = 0; pos < m; ++pos) {
      std::size_t i = detail_nsbf::storage_index_of_file_pos(u.grid, pos);
      detail_nsbf::put_f64(os, u.coef[c][i].real());
      detail_nsbf::put_f64(os, u.coef[c][i].imag());
    }
  if (!os) throw std::runtime_error("save_snapshot: write failed for " + path);
}

inline SpectralField load_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_snapshot: cannot open " + path);
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "NSBF", 4) != 0)
    throw std::runtime_error("load_snapshot: malformed snapshot (bad magic)");
  std::uint32_t version = detail_nsbf::get_u32(is);
  if (version != 1u) throw std::runtime_error("load_snapshot: unsupported version");
  std::uint32_t d = detail_nsbf::get_u32(is);
  std::uint32_t n = detail_nsbf::get_u32(is);
  double box = detail_nsbf::get_f64(is);
  if (!is) throw std::runtime_error("load_snapshot: malformed snapshot (truncated header)");
  Grid g;
  try {
    g = make_grid(static_cast<int>(d), static_cast<int>(n), box);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("load_snapshot: malformed snapshot (") + e.what() + ")");
  }
  SpectralField u(g, g.d);
  const std::size_t m = u.modes();
  for (int c = 0; c < u.comps; ++c)
    for (std::size_t pos = 0; pos < m; ++pos) {
      double re = detail_nsbf::get_f64(is);
      double im = detail_nsbf::get_f64(is);
      if (!is) throw std::runtime_error("load_snapshot: malformed snapshot (truncated data)");
      u.coef[c][detail_nsbf::storage_index_of_file_pos(g, pos)] = cplx{re, im};
    }
  is.peek();
  if (!is.eof()) throw std::runtime_error("load_snapshot: malformed snapshot (trailing bytes)");
  return u;
}

}  // namespace nsbesov
