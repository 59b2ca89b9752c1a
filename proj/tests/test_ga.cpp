#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <unordered_set>

#include "popsize/errors.hpp"
#include "popsize/ga.hpp"

using namespace popsize;

namespace {

std::map<std::uint32_t, int> column_multiset(const std::vector<Genome>& pop, std::size_t partition, unsigned k) {
  std::map<std::uint32_t, int> counts;
  for (const auto& g : pop) ++counts[g.get_block(partition * k, k)];
  return counts;
}

SizingStrategy static_strategy(const ProblemSpec& p) {
  return SizingStrategy(StrategyKind::static_size, TheoryParams::from_problem(p, 0.05));
}

}  // namespace

TEST_CASE("init_population") {
  const auto problem = make_onemax(8);
  Rng rng(1);
  Archive archive;
  const auto pop = init_population(problem, 4, rng, archive);
  CHECK(pop.size() == 4);
  CHECK(archive.misses() <= 4);
  CHECK(archive.misses() + archive.hits() == 4);
  for (std::size_t i = 0; i < pop.size(); ++i) CHECK(pop.fitness[i] == evaluate(problem, pop.members[i]));
  CHECK_THROWS_AS(init_population(problem, 5, rng, archive), InvalidParameter);
  CHECK_THROWS_AS(init_population(problem, 2, rng, archive), InvalidParameter);
}

TEST_CASE("init_population moments follow the uniform distribution") {
  const auto onemax = make_onemax(400);
  double mean = 0, var = 0;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(100 + s);
    Archive archive;
    const auto pop = init_population(onemax, 1000, rng, archive);
    mean += std::accumulate(pop.fitness.begin(), pop.fitness.end(), 0.0) / 1000;
    var += fitness_variance(pop.fitness);
  }
  // Binomial(400, 1/2): mean 200, variance 100.
  CHECK(mean / seeds == doctest::Approx(200).epsilon(0.0025));
  CHECK(var / seeds == doctest::Approx(100).epsilon(0.05));

  const auto trap = make_trap4(80);
  Rng rng(7);
  Archive archive;
  const auto pop = init_population(trap, 1600, rng, archive);
  const auto counts = bb_counts(trap, pop.members);
  const double avg = std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(counts.size());
  CHECK(avg == doctest::Approx(100).epsilon(0.03));
}

TEST_CASE("tournament with a forced pair") {
  Rng rng(3);
  const std::vector<double> f{1.0, 0.0};
  CHECK(tournament_indices(f, 2, rng) == std::vector<std::size_t>{0, 0});
}

TEST_CASE("tournament ties are broken uniformly") {
  Rng rng(5);
  const std::vector<double> f(8, 3.0);
  std::array<int, 8> copies{};
  const int trials = 20000;
  for (int t = 0; t < trials; ++t)
    for (auto i : tournament_indices(f, 8, rng)) ++copies[i];
  for (int c : copies) CHECK(static_cast<double>(c) / trials == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("tournament over two full passes matches the exhaustive pairing distribution") {
  // n = 4 with distinct fitness: enumerate the 3 pairings of each pass.
  const std::vector<double> f{4, 3, 2, 1};
  const std::array<std::array<std::pair<int, int>, 2>, 3> pairings{
      {{{{0, 1}, {2, 3}}}, {{{0, 2}, {1, 3}}}, {{{0, 3}, {1, 2}}}}};
  std::array<double, 4> expected{};
  for (const auto& a : pairings)
    for (const auto& b : pairings)
      for (const auto& pass : {a, b})
        for (const auto& [x, y] : pass) expected[static_cast<std::size_t>(f[x] > f[y] ? x : y)] += 1.0 / 9;

  Rng rng(9);
  std::array<double, 4> seen{};
  const int trials = 30000;
  for (int t = 0; t < trials; ++t) {
    const auto w = tournament_indices(f, 4, rng);
    std::array<int, 4> copies{};
    for (auto i : w) ++copies[i];
    REQUIRE(copies[0] == 2);  // the best wins both of its tournaments
    REQUIRE(copies[3] == 0);
    for (int i = 0; i < 4; ++i) seen[i] += static_cast<double>(copies[i]) / trials;
  }
  CHECK(expected[0] == doctest::Approx(2.0));
  CHECK(expected[1] == doctest::Approx(4.0 / 3));
  CHECK(expected[2] == doctest::Approx(2.0 / 3));
  for (int i = 0; i < 4; ++i) CHECK(seen[i] == doctest::Approx(expected[i]).epsilon(0.02));
}

TEST_CASE("tournament resizing") {
  Rng rng(2);
  std::vector<double> f(10);
  std::iota(f.begin(), f.end(), 0.0);
  CHECK(tournament_indices(f, 4, rng).size() == 4);
  const auto many = tournament_indices(f, 26, rng);
  CHECK(many.size() == 26);
  CHECK(std::count(many.begin(), many.end(), 0) == 0);  // the worst never wins
}

TEST_CASE("shuffle crossover conserves every partition multiset") {
  Rng rng(21);
  std::uniform_int_distribution<int> m_dist(1, 12), k_dist(1, 6), n_dist(1, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    const PartitionLayout layout{static_cast<std::size_t>(m_dist(rng)), static_cast<unsigned>(k_dist(rng))};
    std::vector<Genome> pop(static_cast<std::size_t>(n_dist(rng)), Genome(layout.length()));
    for (auto& g : pop) g.randomize(rng);
    std::vector<std::map<std::uint32_t, int>> before;
    for (std::size_t j = 0; j < layout.m; ++j) before.push_back(column_multiset(pop, j, layout.k));
    shuffle_crossover(pop, layout, rng);
    for (std::size_t j = 0; j < layout.m; ++j) REQUIRE(column_multiset(pop, j, layout.k) == before[j]);
  }
}

TEST_CASE("shuffle crossover small cases") {
  Rng rng(4);
  const PartitionLayout layout{2, 2};
  std::vector<Genome> single{Genome::from_string("1001")};
  shuffle_crossover(single, layout, rng);
  CHECK(single.front().to_string() == "1001");

  std::map<std::string, int> outcomes;
  for (int t = 0; t < 400; ++t) {
    std::vector<Genome> pair{Genome::from_string("1111"), Genome::from_string("0000")};
    shuffle_crossover(pair, layout, rng);
    ++outcomes[pair[0].to_string()];
    CHECK(column_multiset(pair, 0, 2) == std::map<std::uint32_t, int>{{0, 1}, {3, 1}});
    CHECK(column_multiset(pair, 1, 2) == std::map<std::uint32_t, int>{{0, 1}, {3, 1}});
  }
  CHECK(outcomes.size() == 4);
  for (const auto& [text, count] : outcomes) CHECK(count > 50);
}

TEST_CASE("step_generation on a converged population") {
  const auto problem = make_onemax(8);
  auto state = start_run(problem, 4, 1);
  const auto g = Genome::from_string("10110011");
  state.population.members.assign(4, g);
  state.population.fitness.assign(4, state.archive.fitness(problem, g));
  state.partition_status.clear();
  const auto evals = state.evaluations();
  step_generation(state, 4);
  CHECK(state.evaluations() == evals);
  for (const auto& m : state.population.members) CHECK(m == g);
  CHECK(state.generation == 1);
}

TEST_CASE("step_generation resizes and keeps fitness consistent") {
  const auto problem = make_trap4(10);
  auto state = start_run(problem, 40, 5);
  step_generation(state, 40);
  CHECK(state.population.size() == 40);
  step_generation(state, 64);
  CHECK(state.population.size() == 64);
  step_generation(state, 8);
  CHECK(state.population.size() == 8);
  for (std::size_t i = 0; i < state.population.size(); ++i)
    CHECK(state.population.fitness[i] == evaluate(problem, state.population.members[i]));
  CHECK(state.size_history.back() == std::pair{3, 8});
  CHECK_THROWS_AS(step_generation(state, 7), InvalidParameter);
}

TEST_CASE("selection does not lower the mean fitness") {
  const auto problem = make_onemax(50);
  double gain = 0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(1000 + s);
    Archive archive;
    const auto pop = init_population(problem, 30, rng, archive);
    const double before = std::accumulate(pop.fitness.begin(), pop.fitness.end(), 0.0) / 30;
    double after = 0;
    for (auto i : tournament_indices(pop.fitness, 30, rng)) after += pop.fitness[i] / 30;
    gain += after - before;
  }
  CHECK(gain / seeds > 0.0);
}

TEST_CASE("run_ga on a single bit") {
  const auto problem = make_onemax(1);
  for (auto kind : {StrategyKind::static_size, StrategyKind::varfit, StrategyKind::varfit_supply}) {
    const SizingStrategy strategy(kind, TheoryParams::from_problem(problem, 0.05));
    CHECK(strategy.initial_size() == 4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto rec = run_ga(problem, strategy, seed);
      CHECK((rec.quality == 0.0 || rec.quality == 1.0));
      CHECK(rec.generations <= 10);
      CHECK_FALSE(rec.truncated);
    }
  }
}

TEST_CASE("run_ga engine invariants") {
  for (const auto& problem : {make_onemax(30), make_trap4(8)}) {
    const auto params = TheoryParams::from_problem(problem, 0.05);
    for (auto kind : {StrategyKind::static_size, StrategyKind::varfit, StrategyKind::varfit_supply}) {
      const SizingStrategy strategy(kind, params);
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        // Drive the loop by hand to observe every generation.
        auto state = start_run(problem, strategy.initial_size(), seed);
        std::unordered_set<Genome> seen(state.population.members.begin(), state.population.members.end());
        while (!state.converged()) {
          const auto before = state.partition_status;
          const int n = strategy.next_size(observe(state));
          step_generation(state, n);
          REQUIRE(state.population.size() == static_cast<std::size_t>(n));
          REQUIRE(n % 2 == 0);
          REQUIRE(n >= 4);
          seen.insert(state.population.members.begin(), state.population.members.end());
          for (std::size_t i = 0; i < before.size(); ++i) {
            if (before[i] == PartitionStatus::bb_lost) REQUIRE(state.bb_counts[i] == 0);
            if (before[i] == PartitionStatus::bb_won) REQUIRE(state.bb_counts[i] == state.population.size());
          }
        }
        REQUIRE(state.archive.misses() == seen.size());
        REQUIRE(state.archive.size() == seen.size());

        const auto a = run_ga(problem, strategy, seed);
        const auto b = run_ga(problem, strategy, seed);
        REQUIRE(a.evaluations == b.evaluations);
        REQUIRE(a.quality == b.quality);
        REQUIRE(a.size_history == b.size_history);
        REQUIRE(a.evaluations == state.evaluations());
        REQUIRE(a.size_history == state.size_history);
      }
    }
  }
}

TEST_CASE("run_ga truncation is recorded") {
  const auto problem = make_trap4(10);
  const auto rec = run_ga(problem, static_strategy(problem), 3, 1);
  CHECK(rec.truncated);
  CHECK(rec.generations == 1);
  CHECK_THROWS_AS(run_ga(make_trap4(11), static_strategy(problem), 3), InvalidParameter);
}

TEST_CASE("statically sized GA reaches the modelled quality") {
  const auto onemax = make_onemax(100);
  double q = 0;
  for (std::uint64_t s = 0; s < 100; ++s) q += run_ga(onemax, static_strategy(onemax), derive_seed(1, {s})).quality;
  CHECK(q / 100 >= 0.95);

  const auto trap = make_trap4(20);
  q = 0;
  for (std::uint64_t s = 0; s < 100; ++s) q += run_ga(trap, static_strategy(trap), derive_seed(2, {s})).quality;
  CHECK(q / 100 >= 0.99);
}
