// Times the OpenMP kernels against their serial references and checks that
// both produce the same numbers.

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "popsize/experiments.hpp"
#include "popsize/walk.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  using namespace popsize;
  std::cout << "threads " << omp_get_max_threads() << '\n';

  const WalkSpec walk{1000, 500, 0.51};
  const std::uint64_t trials = 200000;
  std::uint64_t par = 0, ser = 0;
  const double t_walk_par = seconds([&] { par = walk_successes(walk, trials, 7); });
  const double t_walk_ser = seconds([&] { ser = walk_successes_serial(walk, trials, 7); });
  std::cout << "walk      parallel " << t_walk_par << " s  serial " << t_walk_ser << " s  speedup "
            << t_walk_ser / t_walk_par << (par == ser ? "  match\n" : "  MISMATCH\n");

  const auto problem = make_trap4(40);
  const SizingStrategy strategy(StrategyKind::varfit_supply, TheoryParams::from_problem(problem, 0.05));
  CellResult a, b;
  const double t_cell_par = seconds([&] { a = run_cell(problem, strategy, 40, 11); });
  const double t_cell_ser = seconds([&] { b = run_cell_serial(problem, strategy, 40, 11); });
  const bool same = a.summary.mean_evaluations == b.summary.mean_evaluations &&
                    a.summary.mean_quality == b.summary.mean_quality;
  std::cout << "run_cell  parallel " << t_cell_par << " s  serial " << t_cell_ser << " s  speedup "
            << t_cell_ser / t_cell_par << (same ? "  match\n" : "  MISMATCH\n");
  return par == ser && same ? EXIT_SUCCESS : EXIT_FAILURE;
}
