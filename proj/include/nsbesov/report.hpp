#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

#include <json.hpp>

namespace nsbesov {

using ordered_json = nlohmann::ordered_json;

/// Scientific notation with 17 significant digits (round-trip exact for
/// IEEE doubles), '.' decimal point, fixed field layout.
inline std::string format_sci17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return std::string(buf);
}

inline void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

inline void write_json_file(const std::string& path, const ordered_json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

/// Comma-separated table with a header row; numbers rendered by
/// format_sci17. Content is accumulated and written in one shot so a rerun
/// produces byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) body_ += ',';
      body_ += columns_[i];
    }
    body_ += '\n';
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
      throw std::invalid_argument("csv: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) body_ += ',';
      body_ += cells[i];
    }
    body_ += '\n';
  }

  const std::string& text() const { return body_; }
  void write(const std::string& path) const { write_text_file(path, body_); }

 private:
  std::vector<std::string> columns_;
  std::string body_;
};

/// Two-column whitespace-separated plot data.
inline void write_plot_data(const std::string& path,
                            const std::vector<std::pair<double, double>>& points) {
  std::string out;
  for (const auto& pt : points) {
    out += format_sci17(pt.first);
    out += ' ';
    out += format_sci17(pt.second);
    out += '\n';
  }
  write_text_file(path, out);
}

/// Build/environment provenance without timestamps, so identical runs yield
/// identical files.
inline ordered_json environment_fingerprint() {
  ordered_json j;
  j["library"] = "nsbesov";
  j["compiler"] = __VERSION__;
  j["cxx_standard"] = static_cast<long>(__cplusplus);
  j["fftw"] = std::string(fftw_version);
  j["pointer_bits"] = static_cast<int>(sizeof(void*) * 8);
  j["byte_order"] = "little-endian";
  return j;
}

}  // namespace nsbesov
