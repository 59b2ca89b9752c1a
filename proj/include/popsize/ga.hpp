#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "popsize/genome.hpp"
#include "popsize/problem.hpp"
#include "popsize/rng.hpp"
#include "popsize/strategy.hpp"

namespace popsize {

struct Population {
  std::vector<Genome> members;
  std::vector<double> fitness;

  std::size_t size() const { return members.size(); }
};

/// Per-run memo of every genome ever evaluated. Misses are the evaluation count.
class Archive {
 public:
  double fitness(const ProblemSpec& problem, const Genome& g);

  bool contains(const Genome& g) const { return table_.contains(g); }
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }
  std::size_t size() const { return table_.size(); }

 private:
  std::unordered_map<Genome, double> table_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

enum class PartitionStatus : std::uint8_t { open, bb_won, bb_lost };

struct RunState {
  const ProblemSpec* problem = nullptr;
  int generation = 0;
  Population population;
  Archive archive;
  Rng rng;
  std::vector<std::size_t> bb_counts;
  std::vector<PartitionStatus> partition_status;
  std::vector<std::pair<int, int>> size_history;  // (generation, n)

  std::uint64_t evaluations() const { return archive.misses(); }
  bool converged() const;
  std::size_t solved() const;
};

struct RunRecord {
  std::uint64_t evaluations = 0;
  double quality = 0.0;
  int generations = 0;
  std::vector<std::pair<int, int>> size_history;
  std::uint64_t seed = 0;
  bool truncated = false;
  int cap_hits = 0;  // generations where the dynamic size was clamped by the cap
};

Population init_population(const ProblemSpec& problem, int n, Rng& rng, Archive& archive);

/// Binary tournament without replacement: passes over a shuffled pairing, each
/// pair sending its fitter member (ties broken uniformly), until `count`
/// winners exist. Returns member indices.
std::vector<std::size_t> tournament_indices(std::span<const double> fitness, std::size_t count, Rng& rng);
std::vector<Genome> tournament_select(const Population& pop, std::size_t count, Rng& rng);

/// Independently permutes each partition's blocks across the list.
void shuffle_crossover(std::vector<Genome>& parents, const PartitionLayout& layout, Rng& rng);

/// Population variance (divisor n).
double fitness_variance(std::span<const double> fitness);

RunState start_run(const ProblemSpec& problem, int n, std::uint64_t seed);
SizingObservation observe(const RunState& state);

/// Selection, crossover, evaluation and full replacement at size next_n.
/// Throws std::logic_error if a converged partition leaves its absorbing state.
void step_generation(RunState& state, int next_n);

/// max_generations == 0 selects 10 * string length.
RunRecord run_ga(const ProblemSpec& problem, const SizingStrategy& strategy, std::uint64_t seed,
                 int max_generations = 0);

}  // namespace popsize
