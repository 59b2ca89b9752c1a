#include "popsize/csv.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "popsize/errors.hpp"

namespace popsize::csv {

std::string format(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw IoError("cannot format number");
  return std::string(buf.data(), end);
}

Writer::Writer(const std::filesystem::path& path, std::string_view header) : path_(path), out_(path) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  write_line(std::string(header));
}

void Writer::write_line(const std::string& line) {
  out_ << line << '\n';
  if (!out_) throw IoError("write failed on " + path_.string());
}

void Writer::close() {
  out_.close();
  if (out_.fail()) throw IoError("closing " + path_.string() + " failed");
}

namespace {
std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}
}  // namespace

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + " is empty");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split(line));
  }
  return t;
}

}  // namespace popsize::csv
