#include "popsize/problem.hpp"

#include <bit>
#include <fstream>
#include <limits>
#include <sstream>

#include "popsize/errors.hpp"

namespace popsize {

SubfunctionStats subfunction_stats(const Subfunction& sub) {
  const std::size_t size = sub.table.size();
  if (size < 2 || !std::has_single_bit(size))
    throw InvalidParameter("subfunction table length must be a power of two >= 2");
  if (sub.bb_index >= size) throw InvalidParameter("building block index outside the table");

  SubfunctionStats s;
  double best_other = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < size; ++c) {
    if (c == sub.bb_index) continue;
    if (sub.table[c] > best_other) {
      best_other = sub.table[c];
      s.competitor_index = static_cast<std::uint32_t>(c);
    }
  }
  s.d = sub.table[sub.bb_index] - best_other;
  if (!(s.d > 0.0))
    throw AmbiguousBuildingBlock("building block is not a unique strict optimum of the table");

  double mean = 0.0;
  for (double v : sub.table) mean += v;
  mean /= static_cast<double>(size);
  double var = 0.0;
  for (double v : sub.table) var += (v - mean) * (v - mean);
  s.sigma_bb_sq = var / static_cast<double>(size);
  return s;
}

ProblemSpec::ProblemSpec(std::string name, PartitionLayout layout, Subfunction sub)
    : name_(std::move(name)), layout_(layout), sub_(std::move(sub)) {
  if (layout_.m == 0 || layout_.k == 0) throw InvalidParameter("partition count and size must be positive");
  if (layout_.k > kMaxPartitionBits) throw InvalidParameter("partition size above 20 bits is not supported");
  if (sub_.table.size() != layout_.configurations())
    throw InvalidParameter("subfunction table must have exactly 2^k entries");
  stats_ = subfunction_stats(sub_);
}

ProblemSpec make_onemax(std::size_t length) {
  return ProblemSpec("onemax", {length, 1}, Subfunction{{0.0, 1.0}, 1});
}

ProblemSpec make_trap4(std::size_t m) {
  Subfunction sub;
  sub.table.resize(16);
  for (unsigned c = 0; c < 16; ++c) {
    const int u = std::popcount(c);
    sub.table[c] = u == 4 ? 4.0 : 3.0 - u;
  }
  sub.bb_index = 15;
  return ProblemSpec("trap4", {m, 4}, std::move(sub));
}

ProblemSpec parse_problem(const std::string& text) {
  std::istringstream in(text);
  long long m = 0, k = 0, bb = 0;
  if (!(in >> m >> k)) throw InvalidParameter("problem file: expected 'm k' on the first line");
  if (m <= 0 || k <= 0 || k > kMaxPartitionBits) throw InvalidParameter("problem file: m and k out of range");
  if (!(in >> bb) || bb < 0) throw InvalidParameter("problem file: expected a building block index");
  Subfunction sub;
  sub.bb_index = static_cast<std::uint32_t>(bb);
  const std::size_t entries = std::size_t{1} << k;
  sub.table.reserve(entries);
  double v = 0.0;
  while (in >> v) sub.table.push_back(v);
  if (!in.eof()) throw InvalidParameter("problem file: non-numeric fitness value");
  if (sub.table.size() != entries)
    throw InvalidParameter("problem file: expected " + std::to_string(entries) + " fitness values, got " +
                           std::to_string(sub.table.size()));
  return ProblemSpec("custom", {static_cast<std::size_t>(m), static_cast<unsigned>(k)}, std::move(sub));
}

ProblemSpec load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open problem file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

double evaluate(const ProblemSpec& problem, const Genome& g) {
  if (g.size() != problem.length())
    throw InvalidGenome("genome length " + std::to_string(g.size()) + " does not match problem length " +
                        std::to_string(problem.length()));
  const auto& table = problem.subfunction().table;
  double f = 0.0;
  for (std::size_t i = 0; i < problem.m(); ++i) f += table[problem.configuration(g, i)];
  return f;
}

std::size_t bb_count(const ProblemSpec& problem, std::span<const Genome> members, std::size_t partition) {
  if (partition >= problem.m())
    throw IndexOutOfRange("partition " + std::to_string(partition) + " out of range [0, " +
                          std::to_string(problem.m()) + ")");
  const auto bb = problem.subfunction().bb_index;
  std::size_t count = 0;
  for (const auto& g : members)
    if (problem.configuration(g, partition) == bb) ++count;
  return count;
}

std::vector<std::size_t> bb_counts(const ProblemSpec& problem, std::span<const Genome> members) {
  std::vector<std::size_t> counts(problem.m(), 0);
  const auto bb = problem.subfunction().bb_index;
  for (const auto& g : members)
    for (std::size_t i = 0; i < problem.m(); ++i)
      if (problem.configuration(g, i) == bb) ++counts[i];
  return counts;
}

}  // namespace popsize
