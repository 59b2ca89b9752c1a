#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "popsize/ga.hpp"
#include "popsize/problem.hpp"
#include "popsize/strategy.hpp"

namespace popsize {

struct CellSummary {
  double mean_evaluations = 0.0;
  double mean_quality = 0.0;
  double std_evaluations = 0.0;  // sample standard deviations
  double std_quality = 0.0;
  int runs = 0;
  int truncated_runs = 0;
  int capped_runs = 0;

  double se_evaluations() const;
  double se_quality() const;
};

CellSummary summarize(std::span<const RunRecord> records);

struct CellResult {
  CellSummary summary;
  std::vector<RunRecord> records;  // in run order
};

/// Run r uses seed derive_seed(master_seed, {r}). OpenMP over runs.
CellResult run_cell(const ProblemSpec& problem, const SizingStrategy& strategy, int runs,
                    std::uint64_t master_seed);
/// Serial reference of run_cell; identical records.
CellResult run_cell_serial(const ProblemSpec& problem, const SizingStrategy& strategy, int runs,
                           std::uint64_t master_seed);

struct BisectionConfig {
  double target_quality = 1.0;
  int runs_per_probe = 50;
  int repeats = 20;
  double resolution = 1.0 / 16.0;
  int hard_limit = 1 << 20;
};

/// Mean quality achieved at a fixed population size.
using QualityProbe = std::function<double(int n)>;

/// Doubling from 4 until the probe meets `target`, then binary search between
/// the last failing and first passing even sizes until the bracket is within
/// `resolution` (relative) or 2. Returns the passing end.
/// Throws UnattainableTarget past `hard_limit`.
int bisect_search(const QualityProbe& probe, double target, double resolution, int hard_limit);

struct BisectionRepeat {
  int min_popsize = 0;
  CellSummary at_min;  // fresh runs at min_popsize
};

struct BisectionResult {
  double mean_min_popsize = 0.0;
  double mean_evaluations = 0.0;
  std::vector<BisectionRepeat> repeats;
  CellSummary optimal_fixed;  // pooled over every repeat's fresh runs
};

/// Repeat r probes with seeds derive_seed(master, {r, 0, i}) and measures
/// evaluations at the found size with fresh seeds derive_seed(master, {r, 1, i}).
/// Repeats run in parallel.
BisectionResult bisect_min_popsize(const ProblemSpec& problem, double alpha, const BisectionConfig& cfg,
                                   std::uint64_t master_seed);

/// Evaluations of the optimal fixed-size GA over those of the dynamic GA.
double speedup(const CellSummary& dynamic, const CellSummary& optimal_fixed);

// CSV emission.

struct CellRow {
  std::string problem;
  std::size_t param = 0;
  StrategyKind strategy = StrategyKind::static_size;
  int run = 0;
  RunRecord record;
};

struct BisectionRow {
  std::string problem;
  std::size_t param = 0;
  int repeat = 0;
  int min_popsize = 0;
  double evaluations_at_min = 0.0;
  double target_quality = 0.0;
};

struct SpeedupRow {
  std::string problem;
  std::size_t param = 0;
  double dynamic_evals = 0.0;
  double optimal_fixed_evals = 0.0;
  double speedup = 0.0;
};

struct SizeHistoryRow {
  int generation = 0;
  int popsize = 0;
  int static_reference = 0;
  double bisection_reference = 0.0;
};

inline constexpr const char* kCellsHeader = "problem,param,strategy,run,seed,evaluations,quality,generations,truncated";
inline constexpr const char* kBisectionHeader = "problem,param,repeat,min_popsize,evaluations_at_min,target_quality";
inline constexpr const char* kSpeedupHeader = "problem,param,dynamic_evals,optimal_fixed_evals,speedup";
inline constexpr const char* kSizeHistoryHeader = "generation,popsize,static_reference,bisection_reference";

void write_cells_csv(const std::filesystem::path& path, std::span<const CellRow> rows);
void write_bisection_csv(const std::filesystem::path& path, std::span<const BisectionRow> rows);
void write_speedup_csv(const std::filesystem::path& path, std::span<const SpeedupRow> rows);
void write_size_history_csv(const std::filesystem::path& path, std::span<const SizeHistoryRow> rows);

/// Parses a cells.csv back; size histories and cap counts are not stored there.
std::vector<CellRow> read_cells_csv(const std::filesystem::path& path);

// Full experiment grid.

struct ReproduceConfig {
  std::uint64_t seed = 1;
  double alpha = 0.05;
  int runs = 100;
  std::vector<std::size_t> onemax_sizes{100, 200, 300, 400};
  std::vector<std::size_t> trap4_sizes{20, 40, 60, 80};
  BisectionConfig bisection;  // target_quality is set per cell
};

struct CellReport {
  std::string problem;
  std::size_t param = 0;
  StrategyKind strategy = StrategyKind::static_size;
  int static_size = 0;
  CellResult result;
};

struct ProblemReport {
  std::string problem;
  std::size_t param = 0;
  double target_quality = 0.0;
  BisectionResult bisection;
  double speedup = 0.0;
};

struct ReproduceReport {
  std::vector<CellReport> cells;
  std::vector<ProblemReport> problems;

  const CellReport& cell(const std::string& problem, std::size_t param, StrategyKind kind) const;
  const ProblemReport& problem(const std::string& problem, std::size_t param) const;
};

ProblemSpec make_builtin(const std::string& name, std::size_t param);

/// Runs every (problem, size, strategy) cell, bisects the optimal fixed size
/// against the varfit-supply quality, and writes onemax_cells.csv,
/// trap4_cells.csv, bisection.csv, speedup.csv and the two size-history files
/// for the largest sizes into `out_dir`.
ReproduceReport reproduce_grid(const ReproduceConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace popsize
