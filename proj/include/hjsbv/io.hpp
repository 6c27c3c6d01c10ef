#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace hjsbv {

using Json = nlohmann::ordered_json;

/// Shortest text that round-trips a double; "nan" / "inf" / "-inf" otherwise.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int p = 15; p <= 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/// RFC 4180 field: quoted when it holds a comma, quote, CR or LF.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : width_(header.size()) { row(header); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += csv_field(cells[i]);
    }
    text_ += "\r\n";
  }

  void row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(format_double(v));
    row(s);
  }

  const std::string& text() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

/// Writes plain file names into one directory and nowhere else.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
  }

  const std::filesystem::path& root() const { return root_; }
  const std::vector<std::string>& written() const { return written_; }

  void write_text(const std::string& name, const std::string& text) {
    std::ofstream out(target(name), std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + name);
  }

  void write_json(const std::string& name, const Json& j) { write_text(name, j.dump(2) + "\n"); }

  void write_doubles(const std::string& name, const std::vector<double>& v) {
    std::ofstream out(target(name), std::ios::binary | std::ios::trunc);
    for (double x : v) {
      unsigned char b[8];
      std::uint64_t bits;
      std::memcpy(&bits, &x, 8);
      for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
      out.write(reinterpret_cast<const char*>(b), 8);
    }
    if (!out) throw std::runtime_error("cannot write " + name);
  }

 private:
  std::filesystem::path target(const std::string& name) {
    if (name.empty() || name == "." || name == ".." || name.find_first_of("/\\") != std::string::npos)
      throw std::invalid_argument("output names must be plain file names: " + name);
    written_.push_back(name);
    return root_ / name;
  }

  std::filesystem::path root_;
  std::vector<std::string> written_;
};

}  // namespace hjsbv
