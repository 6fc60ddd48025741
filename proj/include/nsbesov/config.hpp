#pragma once

#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nsbesov/besov.hpp>
#include <nsbesov/grid.hpp>

namespace nsbesov {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double parse_double_strict(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + what + ": '" + text + "'");
  }
  if (used != text.size())
    throw std::invalid_argument("config: bad number for " + what + ": '" + text + "'");
  return v;
}

}  // namespace detail

/// Flat `key = value` configuration: one pair per line, `#` starts a
/// comment, keys are namespaced (grid.n, solver.max_iter, ...). Duplicate
/// keys are an error; the echo lists pairs in sorted key order.
struct Config {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }

  const std::string& get_string(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw std::invalid_argument("config: missing key " + key);
    return it->second;
  }
  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }

  double get_double(const std::string& key) const {
    return detail::parse_double_strict(get_string(key), key);
  }
  double get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  int get_int(const std::string& key) const {
    const double v = get_double(key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw std::invalid_argument("config: expected integer for " + key);
    return i;
  }
  int get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  unsigned long long get_u64(const std::string& key) const {
    const std::string& s = get_string(key);
    try {
      std::size_t used = 0;
      unsigned long long v = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("config: bad unsigned integer for " + key + ": '" + s + "'");
    }
  }
  unsigned long long get_u64(const std::string& key, unsigned long long fallback) const {
    return has(key) ? get_u64(key) : fallback;
  }

  bool get_bool(const std::string& key) const {
    const std::string& s = get_string(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::invalid_argument("config: expected true/false for " + key);
  }
  bool get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
  }

  /// Comma-separated list of numbers.
  std::vector<double> get_double_list(const std::string& key) const {
    const std::string& s = get_string(key);
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = detail::trim(item);
      if (item.empty()) throw std::invalid_argument("config: empty list entry in " + key);
      out.push_back(detail::parse_double_strict(item, key));
    }
    if (out.empty()) throw std::invalid_argument("config: empty list for " + key);
    return out;
  }
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const {
    return has(key) ? get_double_list(key) : fallback;
  }

  void set(const std::string& key, const std::string& value) { values[key] = value; }

  /// Canonical echo: `key = value` lines in sorted key order.
  std::string echo() const {
    std::string out;
    for (const auto& kv : values) {
      out += kv.first;
      out += " = ";
      out += kv.second;
      out += "\n";
    }
    return out;
  }
};

inline Config parse_config(const std::string& text) {
  Config cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: malformed line " + std::to_string(line_no) +
                                  " (expected key = value)");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config: empty key on line " + std::to_string(line_no));
    if (cfg.has(key)) throw std::invalid_argument("config: duplicate key " + key);
    cfg.set(key, value);
  }
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Parses "d,n,L" into a validated grid.
inline Grid parse_grid_triplet(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
    throw std::invalid_argument("grid: expected d,n,L");
  const double d = detail::parse_double_strict(detail::trim(a), "grid d");
  const double n = detail::parse_double_strict(detail::trim(b), "grid n");
  const double L = detail::parse_double_strict(detail::trim(c), "grid L");
  return make_grid(static_cast<int>(d), static_cast<int>(n), L);
}

/// Parses "s,p,r" (r may be "inf") into a validated Besov spec.
inline BesovSpec parse_spec_triplet(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
    throw std::invalid_argument("spec: expected s,p,r");
  const std::string rtext = detail::trim(c);
  const double r = (rtext == "inf") ? inf : detail::parse_double_strict(rtext, "spec r");
  return BesovSpec{detail::parse_double_strict(detail::trim(a), "spec s"),
                   detail::parse_double_strict(detail::trim(b), "spec p"), r};
}

}  // namespace nsbesov
