#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "popsize/genome.hpp"

namespace popsize {

inline constexpr unsigned kMaxPartitionBits = 20;

/// m contiguous partitions of k bits each; partition i covers [i*k, (i+1)*k).
struct PartitionLayout {
  std::size_t m = 0;
  unsigned k = 0;

  std::size_t length() const { return m * k; }
  std::size_t configurations() const { return std::size_t{1} << k; }
};

/// Lookup table over the 2^k configurations of one partition.
struct Subfunction {
  std::vector<double> table;
  std::uint32_t bb_index = 0;
};

struct SubfunctionStats {
  double d = 0.0;            // table[bb] - best competitor
  double sigma_bb_sq = 0.0;  // variance under uniform configurations
  std::uint32_t competitor_index = 0;
};

/// Signal, variance and toughest competitor of a subfunction. Competitor ties
/// resolve to the lowest configuration. Throws AmbiguousBuildingBlock when
/// the building block is not a strict unique maximum.
SubfunctionStats subfunction_stats(const Subfunction& sub);

/// Additively decomposable, uniformly scaled function: every partition is
/// scored by the same subfunction.
class ProblemSpec {
 public:
  ProblemSpec(std::string name, PartitionLayout layout, Subfunction sub);

  const std::string& name() const { return name_; }
  const PartitionLayout& layout() const { return layout_; }
  const Subfunction& subfunction() const { return sub_; }
  const SubfunctionStats& stats() const { return stats_; }

  std::size_t m() const { return layout_.m; }
  unsigned k() const { return layout_.k; }
  std::size_t length() const { return layout_.length(); }

  std::uint32_t configuration(const Genome& g, std::size_t partition) const {
    return g.get_block(partition * layout_.k, layout_.k);
  }

 private:
  std::string name_;
  PartitionLayout layout_;
  Subfunction sub_;
  SubfunctionStats stats_;
};

ProblemSpec make_onemax(std::size_t length);
ProblemSpec make_trap4(std::size_t m);

/// Custom problem text: "m k" / "bb_index" / 2^k fitness values.
ProblemSpec parse_problem(const std::string& text);
ProblemSpec load_problem_file(const std::filesystem::path& path);

/// Sum of per-partition table lookups. Throws InvalidGenome on length mismatch.
double evaluate(const ProblemSpec& problem, const Genome& g);

/// Number of genomes carrying the building block in `partition`.
std::size_t bb_count(const ProblemSpec& problem, std::span<const Genome> members,
                     std::size_t partition);

/// bb_count for every partition in one pass.
std::vector<std::size_t> bb_counts(const ProblemSpec& problem, std::span<const Genome> members);

}  // namespace popsize
