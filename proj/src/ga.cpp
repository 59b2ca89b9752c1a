#include "popsize/ga.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "popsize/errors.hpp"

namespace popsize {

double Archive::fitness(const ProblemSpec& problem, const Genome& g) {
  if (auto it = table_.find(g); it != table_.end()) {
    ++hits_;
    return it->second;
  }
  ++misses_;
  const double f = evaluate(problem, g);
  table_.emplace(g, f);
  return f;
}

bool RunState::converged() const {
  return std::none_of(partition_status.begin(), partition_status.end(),
                      [](PartitionStatus s) { return s == PartitionStatus::open; });
}

std::size_t RunState::solved() const {
  return static_cast<std::size_t>(std::count(partition_status.begin(), partition_status.end(), PartitionStatus::bb_won));
}

namespace {

void check_size(int n) {
  if (n < kMinPopulation || n % 2 != 0) throw InvalidParameter("population size must be even and at least 4");
}

void update_status(RunState& state) {
  const auto n = state.population.size();
  state.bb_counts = bb_counts(*state.problem, state.population.members);
  const bool first = state.partition_status.empty();
  if (first) state.partition_status.assign(state.bb_counts.size(), PartitionStatus::open);
  for (std::size_t i = 0; i < state.bb_counts.size(); ++i) {
    const auto c = state.bb_counts[i];
    auto& s = state.partition_status[i];
    if (s == PartitionStatus::bb_lost && c != 0) throw std::logic_error("lost building block reappeared");
    if (s == PartitionStatus::bb_won && c != n) throw std::logic_error("fixed building block was lost");
    s = c == n ? PartitionStatus::bb_won : c == 0 ? PartitionStatus::bb_lost : PartitionStatus::open;
  }
}

}  // namespace

Population init_population(const ProblemSpec& problem, int n, Rng& rng, Archive& archive) {
  check_size(n);
  Population pop;
  pop.members.reserve(static_cast<std::size_t>(n));
  pop.fitness.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Genome g(problem.length());
    g.randomize(rng);
    pop.fitness.push_back(archive.fitness(problem, g));
    pop.members.push_back(std::move(g));
  }
  return pop;
}

std::vector<std::size_t> tournament_indices(std::span<const double> fitness, std::size_t count, Rng& rng) {
  if (fitness.size() < 2) throw InvalidParameter("tournament needs at least two members");
  std::vector<std::size_t> order(fitness.size());
  std::vector<std::size_t> winners;
  winners.reserve(count);
  std::bernoulli_distribution coin(0.5);
  while (winners.size() < count) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i + 1 < order.size() && winners.size() < count; i += 2) {
      const auto a = order[i];
      const auto b = order[i + 1];
      if (fitness[a] > fitness[b])
        winners.push_back(a);
      else if (fitness[b] > fitness[a])
        winners.push_back(b);
      else
        winners.push_back(coin(rng) ? a : b);
    }
  }
  return winners;
}

std::vector<Genome> tournament_select(const Population& pop, std::size_t count, Rng& rng) {
  std::vector<Genome> out;
  out.reserve(count);
  for (auto i : tournament_indices(pop.fitness, count, rng)) out.push_back(pop.members[i]);
  return out;
}

void shuffle_crossover(std::vector<Genome>& parents, const PartitionLayout& layout, Rng& rng) {
  const std::size_t n = parents.size();
  if (n < 2) return;
  std::vector<std::uint32_t> column(n);
  for (std::size_t j = 0; j < layout.m; ++j) {
    const std::size_t pos = j * layout.k;
    for (std::size_t i = 0; i < n; ++i) column[i] = parents[i].get_block(pos, layout.k);
    std::shuffle(column.begin(), column.end(), rng);
    for (std::size_t i = 0; i < n; ++i) parents[i].set_block(pos, layout.k, column[i]);
  }
}

double fitness_variance(std::span<const double> fitness) {
  if (fitness.empty()) return 0.0;
  const double n = static_cast<double>(fitness.size());
  const double mean = std::accumulate(fitness.begin(), fitness.end(), 0.0) / n;
  double ss = 0.0;
  for (double f : fitness) ss += (f - mean) * (f - mean);
  return ss / n;
}

RunState start_run(const ProblemSpec& problem, int n, std::uint64_t seed) {
  RunState state;
  state.problem = &problem;
  state.rng.seed(seed);
  state.population = init_population(problem, n, state.rng, state.archive);
  state.size_history.emplace_back(0, n);
  update_status(state);
  return state;
}

SizingObservation observe(const RunState& state) {
  return {fitness_variance(state.population.fitness), state.bb_counts,
          static_cast<int>(state.population.size())};
}

void step_generation(RunState& state, int next_n) {
  check_size(next_n);
  const auto& problem = *state.problem;
  auto offspring = tournament_select(state.population, static_cast<std::size_t>(next_n), state.rng);
  shuffle_crossover(offspring, problem.layout(), state.rng);

  Population next;
  next.fitness.reserve(offspring.size());
  for (const auto& g : offspring) next.fitness.push_back(state.archive.fitness(problem, g));
  next.members = std::move(offspring);
  state.population = std::move(next);

  ++state.generation;
  state.size_history.emplace_back(state.generation, next_n);
  update_status(state);
}

RunRecord run_ga(const ProblemSpec& problem, const SizingStrategy& strategy, std::uint64_t seed,
                 int max_generations) {
  if (strategy.params().m != problem.m() || strategy.params().k != problem.k())
    throw InvalidParameter("strategy parameters do not match the problem layout");
  if (max_generations <= 0) max_generations = static_cast<int>(10 * problem.length());

  RunRecord record;
  record.seed = seed;
  RunState state = start_run(problem, strategy.initial_size(), seed);
  while (!state.converged() && state.generation < max_generations) {
    const auto decision = strategy.decide(observe(state));
    if (decision.capped) ++record.cap_hits;
    step_generation(state, decision.n);
  }
  record.evaluations = state.evaluations();
  record.quality = static_cast<double>(state.solved()) / static_cast<double>(problem.m());
  record.generations = state.generation;
  record.truncated = !state.converged();
  record.size_history = std::move(state.size_history);
  return record;
}

}  // namespace popsize
