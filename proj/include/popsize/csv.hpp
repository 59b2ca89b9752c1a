#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace popsize::csv {

/// Shortest round-trip decimal form.
std::string format(double v);

/// Line-buffered CSV file writer; every failure raises IoError naming the path.
class Writer {
 public:
  Writer(const std::filesystem::path& path, std::string_view header);

  template <class... Fields>
  void row(const Fields&... fields) {
    std::string line;
    bool first = true;
    ((append(line, fields, first)), ...);
    write_line(line);
  }

  void close();

 private:
  static std::string text(const std::string& s) { return s; }
  static std::string text(std::string_view s) { return std::string(s); }
  static std::string text(const char* s) { return s; }
  static std::string text(double v) { return format(v); }
  static std::string text(bool v) { return v ? "1" : "0"; }
  template <class Int>
    requires std::is_integral_v<Int>
  static std::string text(Int v) {
    return std::to_string(v);
  }

  template <class T>
  static void append(std::string& line, const T& v, bool& first) {
    if (!first) line += ',';
    first = false;
    line += text(v);
  }

  void write_line(const std::string& line);

  std::filesystem::path path_;
  std::ofstream out_;
};

/// Header and rows of a small CSV file (no quoting: fields never contain commas).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read(const std::filesystem::path& path);

}  // namespace popsize::csv
