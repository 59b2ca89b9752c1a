// popsize-lab: command line front end for the sizing theory, the GA and the
// experiment grid.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "popsize/csv.hpp"
#include "popsize/errors.hpp"
#include "popsize/experiments.hpp"
#include "popsize/theory.hpp"

namespace {

using namespace popsize;

constexpr int kExitInvalid = 2;
constexpr int kExitUnattainable = 3;

struct ProblemArgs {
  std::string problem = "onemax";
  std::optional<std::size_t> size;
};

void add_problem_options(CLI::App* cmd, ProblemArgs& args) {
  cmd->add_option("--problem", args.problem, "onemax | trap4 | custom:<file>")->required();
  cmd->add_option("--size", args.size, "string length (onemax) or subfunction count (trap4)");
}

ProblemSpec resolve_problem(const ProblemArgs& args) {
  if (args.problem.rfind("custom:", 0) == 0) return load_problem_file(args.problem.substr(7));
  if (!args.size) throw InvalidParameter("--size is required for built-in problems");
  return make_builtin(args.problem, *args.size);
}

std::size_t problem_param(const ProblemArgs& args, const ProblemSpec& problem) {
  return args.size.value_or(problem.m());
}

void print_summary(const std::string& label, const CellSummary& s) {
  std::cout << label << " mean_evaluations=" << csv::format(s.mean_evaluations)
            << " mean_quality=" << csv::format(s.mean_quality) << " std_evaluations=" << csv::format(s.std_evaluations)
            << " std_quality=" << csv::format(s.std_quality) << " truncated_runs=" << s.truncated_runs
            << " capped_runs=" << s.capped_runs << '\n';
}

int cmd_theory(const ProblemArgs& args, double alpha) {
  const auto problem = resolve_problem(args);
  const auto params = TheoryParams::from_problem(problem, alpha);
  const int n = size_static(params);
  std::cout << "problem=" << problem.name() << '\n'
            << "m=" << problem.m() << '\n'
            << "k=" << problem.k() << '\n'
            << "alpha=" << csv::format(alpha) << '\n'
            << "d=" << csv::format(params.d) << '\n'
            << "sigma_bb=" << csv::format(params.sigma_bb) << '\n';
  if (problem.m() >= 2) {
    const double p = p_decide_model(params);
    std::cout << "p=" << csv::format(p) << '\n';
    std::cout << "n_static_real=" << csv::format(size_static_real(params)) << '\n' << "n_static=" << n << '\n';
    const WalkSpec walk{n, std::ldexp(static_cast<double>(n), -static_cast<int>(problem.k())), p};
    std::cout << "gr_success=" << csv::format(gr_success(walk)) << '\n';
  } else {
    std::cout << "n_static=" << n << '\n';
  }
  return 0;
}

int cmd_run(const ProblemArgs& args, const std::string& strategy_token, double alpha, int runs, std::uint64_t seed,
            const std::filesystem::path& out) {
  const auto problem = resolve_problem(args);
  const auto kind = parse_strategy(strategy_token);
  const SizingStrategy strategy(kind, TheoryParams::from_problem(problem, alpha));
  const auto cell = run_cell(problem, strategy, runs, seed);

  std::filesystem::create_directories(out);
  std::vector<CellRow> rows;
  for (std::size_t r = 0; r < cell.records.size(); ++r)
    rows.push_back({problem.name(), problem_param(args, problem), kind, static_cast<int>(r), cell.records[r]});
  write_cells_csv(out / "cells.csv", rows);

  std::vector<SizeHistoryRow> history;
  for (const auto& [gen, n] : cell.records.front().size_history)
    history.push_back({gen, n, size_static(strategy.params()), 0.0});
  write_size_history_csv(out / "size_history.csv", history);

  print_summary(std::string(to_string(kind)), cell.summary);
  return 0;
}

int cmd_bisect(const ProblemArgs& args, double alpha, const BisectionConfig& cfg, std::uint64_t seed,
               const std::filesystem::path& out) {
  const auto problem = resolve_problem(args);
  const auto result = bisect_min_popsize(problem, alpha, cfg, seed);

  std::filesystem::create_directories(out);
  std::vector<BisectionRow> rows;
  for (std::size_t r = 0; r < result.repeats.size(); ++r)
    rows.push_back({problem.name(), problem_param(args, problem), static_cast<int>(r), result.repeats[r].min_popsize,
                    result.repeats[r].at_min.mean_evaluations, cfg.target_quality});
  write_bisection_csv(out / "bisection.csv", rows);

  std::cout << "mean_min_popsize=" << csv::format(result.mean_min_popsize) << '\n'
            << "mean_evaluations=" << csv::format(result.mean_evaluations) << '\n'
            << "mean_quality=" << csv::format(result.optimal_fixed.mean_quality) << '\n';
  return 0;
}

int cmd_reproduce(const ReproduceConfig& cfg, const std::filesystem::path& out) {
  const auto report = reproduce_grid(cfg, out);
  for (const auto& c : report.cells)
    print_summary(c.problem + " " + std::to_string(c.param) + " " + std::string(to_string(c.strategy)),
                  c.result.summary);
  for (const auto& p : report.problems)
    std::cout << p.problem << ' ' << p.param << " target=" << csv::format(p.target_quality)
              << " bisected_n=" << csv::format(p.bisection.mean_min_popsize)
              << " speedup=" << csv::format(p.speedup) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Population sizing laboratory for selecto-recombinative genetic algorithms"};
  app.require_subcommand(1);

  ProblemArgs problem_args;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::string out = "out";

  auto* theory = app.add_subcommand("theory", "print sizing model quantities for a problem");
  add_problem_options(theory, problem_args);
  theory->add_option("--alpha", alpha, "tolerated failure rate");

  std::string strategy = "static";
  int runs = 100;
  auto* run = app.add_subcommand("run", "run a batch of GAs and write cells.csv");
  add_problem_options(run, problem_args);
  run->add_option("--strategy", strategy, "static | varfit | varfit-supply")
      ->check(CLI::IsMember({"static", "varfit", "varfit-supply"}));
  run->add_option("--alpha", alpha);
  run->add_option("--runs", runs)->check(CLI::PositiveNumber);
  run->add_option("--seed", seed);
  run->add_option("--out", out);

  BisectionConfig bcfg;
  auto* bisect = app.add_subcommand("bisect", "search the minimal fixed population size for a target quality");
  add_problem_options(bisect, problem_args);
  bisect->add_option("--target", bcfg.target_quality)->required();
  bisect->add_option("--alpha", alpha);
  bisect->add_option("--probe-runs", bcfg.runs_per_probe)->check(CLI::PositiveNumber);
  bisect->add_option("--repeats", bcfg.repeats)->check(CLI::PositiveNumber);
  bisect->add_option("--max-popsize", bcfg.hard_limit, "give up once doubling passes this size")
      ->check(CLI::Range(4, 1 << 30));
  bisect->add_option("--seed", seed);
  bisect->add_option("--out", out);

  ReproduceConfig rcfg;
  auto* reproduce = app.add_subcommand("reproduce", "run the full experiment grid");
  reproduce->add_option("--seed", rcfg.seed);
  reproduce->add_option("--out", out);
  reproduce->add_option("--runs", rcfg.runs, "runs per cell")->check(CLI::PositiveNumber);
  reproduce->add_option("--probe-runs", rcfg.bisection.runs_per_probe)->check(CLI::PositiveNumber);
  reproduce->add_option("--repeats", rcfg.bisection.repeats)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*theory) return cmd_theory(problem_args, alpha);
    if (*run) return cmd_run(problem_args, strategy, alpha, runs, seed, out);
    if (*bisect) return cmd_bisect(problem_args, alpha, bcfg, seed, out);
    if (*reproduce) return cmd_reproduce(rcfg, out);
  } catch (const UnattainableTarget& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnattainable;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const AmbiguousBuildingBlock& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
