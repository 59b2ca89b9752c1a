#include "popsize/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "popsize/csv.hpp"
#include "popsize/errors.hpp"
#include "popsize/rng.hpp"
#include "popsize/theory.hpp"

namespace popsize {

double CellSummary::se_evaluations() const { return runs > 0 ? std_evaluations / std::sqrt(runs) : 0.0; }
double CellSummary::se_quality() const { return runs > 0 ? std_quality / std::sqrt(runs) : 0.0; }

CellSummary summarize(std::span<const RunRecord> records) {
  CellSummary s;
  s.runs = static_cast<int>(records.size());
  if (records.empty()) return s;
  const double n = static_cast<double>(records.size());
  for (const auto& r : records) {
    s.mean_evaluations += static_cast<double>(r.evaluations);
    s.mean_quality += r.quality;
    if (r.truncated) ++s.truncated_runs;
    if (r.cap_hits > 0) ++s.capped_runs;
  }
  s.mean_evaluations /= n;
  s.mean_quality /= n;
  if (records.size() > 1) {
    double ve = 0.0, vq = 0.0;
    for (const auto& r : records) {
      ve += std::pow(static_cast<double>(r.evaluations) - s.mean_evaluations, 2);
      vq += std::pow(r.quality - s.mean_quality, 2);
    }
    s.std_evaluations = std::sqrt(ve / (n - 1));
    s.std_quality = std::sqrt(vq / (n - 1));
  }
  return s;
}

CellResult run_cell(const ProblemSpec& problem, const SizingStrategy& strategy, int runs,
                    std::uint64_t master_seed) {
  if (runs < 1) throw InvalidParameter("a cell needs at least one run");
  CellResult out;
  out.records.resize(static_cast<std::size_t>(runs));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < runs; ++r)
    out.records[static_cast<std::size_t>(r)] =
        run_ga(problem, strategy, derive_seed(master_seed, {static_cast<std::uint64_t>(r)}));
  out.summary = summarize(out.records);
  return out;
}

CellResult run_cell_serial(const ProblemSpec& problem, const SizingStrategy& strategy, int runs,
                           std::uint64_t master_seed) {
  if (runs < 1) throw InvalidParameter("a cell needs at least one run");
  CellResult out;
  out.records.reserve(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r)
    out.records.push_back(run_ga(problem, strategy, derive_seed(master_seed, {static_cast<std::uint64_t>(r)})));
  out.summary = summarize(out.records);
  return out;
}

int bisect_search(const QualityProbe& probe, double target, double resolution, int hard_limit) {
  if (target > 1.0) throw InvalidParameter("target quality above 1 is unattainable");
  if (!(resolution > 0.0)) throw InvalidParameter("bisection resolution must be positive");

  int pass = kMinPopulation;
  int fail = 0;
  while (probe(pass) < target) {
    fail = pass;
    if (pass > hard_limit / 2)
      throw UnattainableTarget("no population size up to " + std::to_string(hard_limit) + " reaches quality " +
                               csv::format(target));
    pass *= 2;
  }
  if (fail == 0) return pass;

  while (pass - fail > 2 && static_cast<double>(pass - fail) > resolution * pass) {
    const int mid = (fail + pass) / 4 * 2;
    if (probe(mid) >= target)
      pass = mid;
    else
      fail = mid;
  }
  return pass;
}

namespace {

BisectionRepeat bisect_repeat(const ProblemSpec& problem, const TheoryParams& params, const BisectionConfig& cfg,
                              std::uint64_t master_seed, int repeat) {
  const auto r = static_cast<std::uint64_t>(repeat);
  const std::uint64_t probe_seed = derive_seed(master_seed, {r, 0});
  const QualityProbe probe = [&](int n) {
    return run_cell_serial(problem, SizingStrategy::fixed(params, n), cfg.runs_per_probe, probe_seed)
        .summary.mean_quality;
  };
  BisectionRepeat out;
  out.min_popsize = bisect_search(probe, cfg.target_quality, cfg.resolution, cfg.hard_limit);
  out.at_min = run_cell_serial(problem, SizingStrategy::fixed(params, out.min_popsize), cfg.runs_per_probe,
                               derive_seed(master_seed, {r, 1}))
                   .summary;
  return out;
}

}  // namespace

BisectionResult bisect_min_popsize(const ProblemSpec& problem, double alpha, const BisectionConfig& cfg,
                                   std::uint64_t master_seed) {
  if (cfg.repeats < 1 || cfg.runs_per_probe < 1) throw InvalidParameter("bisection needs repeats and probe runs");
  if (cfg.target_quality > 1.0) throw InvalidParameter("target quality above 1 is unattainable");
  const auto params = TheoryParams::from_problem(problem, alpha);

  BisectionResult result;
  result.repeats.resize(static_cast<std::size_t>(cfg.repeats));
  std::vector<std::exception_ptr> errors(result.repeats.size());
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < cfg.repeats; ++r) {
    try {
      result.repeats[static_cast<std::size_t>(r)] = bisect_repeat(problem, params, cfg, master_seed, r);
    } catch (...) {
      errors[static_cast<std::size_t>(r)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  double total_evals = 0.0;
  double total_q = 0.0;
  double sq_evals = 0.0;
  double sq_q = 0.0;
  for (const auto& rep : result.repeats) {
    result.mean_min_popsize += rep.min_popsize;
    total_evals += rep.at_min.mean_evaluations;
    total_q += rep.at_min.mean_quality;
  }
  const double reps = static_cast<double>(cfg.repeats);
  result.mean_min_popsize /= reps;
  result.mean_evaluations = total_evals / reps;

  // Pool the fresh runs: every repeat contributed runs_per_probe records.
  auto& pooled = result.optimal_fixed;
  pooled.runs = cfg.repeats * cfg.runs_per_probe;
  pooled.mean_evaluations = result.mean_evaluations;
  pooled.mean_quality = total_q / reps;
  const double k = cfg.runs_per_probe;
  for (const auto& rep : result.repeats) {
    const auto& s = rep.at_min;
    sq_evals += (k - 1) * s.std_evaluations * s.std_evaluations +
                k * std::pow(s.mean_evaluations - pooled.mean_evaluations, 2);
    sq_q += (k - 1) * s.std_quality * s.std_quality + k * std::pow(s.mean_quality - pooled.mean_quality, 2);
    pooled.truncated_runs += s.truncated_runs;
  }
  if (pooled.runs > 1) {
    pooled.std_evaluations = std::sqrt(sq_evals / (pooled.runs - 1));
    pooled.std_quality = std::sqrt(sq_q / (pooled.runs - 1));
  }
  return result;
}

double speedup(const CellSummary& dynamic, const CellSummary& optimal_fixed) {
  if (!(dynamic.mean_evaluations > 0.0)) throw InvalidParameter("dynamic summary has no evaluations");
  return optimal_fixed.mean_evaluations / dynamic.mean_evaluations;
}

void write_cells_csv(const std::filesystem::path& path, std::span<const CellRow> rows) {
  csv::Writer w(path, kCellsHeader);
  for (const auto& r : rows)
    w.row(r.problem, r.param, to_string(r.strategy), r.run, r.record.seed, r.record.evaluations, r.record.quality,
          r.record.generations, r.record.truncated);
  w.close();
}

void write_bisection_csv(const std::filesystem::path& path, std::span<const BisectionRow> rows) {
  csv::Writer w(path, kBisectionHeader);
  for (const auto& r : rows)
    w.row(r.problem, r.param, r.repeat, r.min_popsize, r.evaluations_at_min, r.target_quality);
  w.close();
}

void write_speedup_csv(const std::filesystem::path& path, std::span<const SpeedupRow> rows) {
  csv::Writer w(path, kSpeedupHeader);
  for (const auto& r : rows) w.row(r.problem, r.param, r.dynamic_evals, r.optimal_fixed_evals, r.speedup);
  w.close();
}

void write_size_history_csv(const std::filesystem::path& path, std::span<const SizeHistoryRow> rows) {
  csv::Writer w(path, kSizeHistoryHeader);
  for (const auto& r : rows) w.row(r.generation, r.popsize, r.static_reference, r.bisection_reference);
  w.close();
}

std::vector<CellRow> read_cells_csv(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  std::string header;
  for (std::size_t i = 0; i < table.header.size(); ++i) header += (i ? "," : "") + table.header[i];
  if (header != kCellsHeader) throw IoError(path.string() + ": unexpected header '" + header + "'");
  std::vector<CellRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& f : table.rows) {
    if (f.size() != 9) throw IoError(path.string() + ": malformed row");
    CellRow r;
    r.problem = f[0];
    r.param = std::stoull(f[1]);
    r.strategy = parse_strategy(f[2]);
    r.run = std::stoi(f[3]);
    r.record.seed = std::stoull(f[4]);
    r.record.evaluations = std::stoull(f[5]);
    r.record.quality = std::stod(f[6]);
    r.record.generations = std::stoi(f[7]);
    r.record.truncated = f[8] == "1";
    rows.push_back(std::move(r));
  }
  return rows;
}

const CellReport& ReproduceReport::cell(const std::string& problem, std::size_t param, StrategyKind kind) const {
  for (const auto& c : cells)
    if (c.problem == problem && c.param == param && c.strategy == kind) return c;
  throw InvalidParameter("no cell " + problem + " " + std::to_string(param));
}

const ProblemReport& ReproduceReport::problem(const std::string& name, std::size_t param) const {
  for (const auto& p : problems)
    if (p.problem == name && p.param == param) return p;
  throw InvalidParameter("no problem " + name + " " + std::to_string(param));
}

ProblemSpec make_builtin(const std::string& name, std::size_t param) {
  if (name == "onemax") return make_onemax(param);
  if (name == "trap4") return make_trap4(param);
  throw InvalidParameter("unknown problem '" + name + "'");
}

ReproduceReport reproduce_grid(const ReproduceConfig& cfg, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  constexpr StrategyKind kinds[] = {StrategyKind::static_size, StrategyKind::varfit, StrategyKind::varfit_supply};

  ReproduceReport report;
  std::vector<BisectionRow> bisection_rows;
  std::vector<SpeedupRow> speedup_rows;

  const std::pair<std::string, const std::vector<std::size_t>*> families[] = {{"onemax", &cfg.onemax_sizes},
                                                                               {"trap4", &cfg.trap4_sizes}};
  for (std::uint64_t fam = 0; fam < 2; ++fam) {
    const auto& [name, sizes] = families[fam];
    if (sizes->empty()) continue;
    std::vector<CellRow> cell_rows;
    for (const auto size : *sizes) {
      const auto problem = make_builtin(name, size);
      const auto params = TheoryParams::from_problem(problem, cfg.alpha);
      for (const auto kind : kinds) {
        CellReport cell{name, size, kind, size_static(params), {}};
        cell.result = run_cell(problem, SizingStrategy(kind, params), cfg.runs,
                               derive_seed(cfg.seed, {fam, size, static_cast<std::uint64_t>(kind)}));
        for (std::size_t r = 0; r < cell.result.records.size(); ++r)
          cell_rows.push_back({name, size, kind, static_cast<int>(r), cell.result.records[r]});
        report.cells.push_back(std::move(cell));
      }

      ProblemReport pr{name, size, 0.0, {}, 0.0};
      const auto& dynamic = report.cell(name, size, StrategyKind::varfit_supply).result.summary;
      pr.target_quality = dynamic.mean_quality;
      auto bcfg = cfg.bisection;
      bcfg.target_quality = pr.target_quality;
      pr.bisection = bisect_min_popsize(problem, cfg.alpha, bcfg, derive_seed(cfg.seed, {fam, size, 99}));
      pr.speedup = speedup(dynamic, pr.bisection.optimal_fixed);
      for (std::size_t r = 0; r < pr.bisection.repeats.size(); ++r) {
        const auto& rep = pr.bisection.repeats[r];
        bisection_rows.push_back(
            {name, size, static_cast<int>(r), rep.min_popsize, rep.at_min.mean_evaluations, pr.target_quality});
      }
      speedup_rows.push_back({name, size, dynamic.mean_evaluations, pr.bisection.mean_evaluations, pr.speedup});
      report.problems.push_back(std::move(pr));
    }
    write_cells_csv(out_dir / (name + "_cells.csv"), cell_rows);

    const auto largest = *std::max_element(sizes->begin(), sizes->end());
    const auto& cell = report.cell(name, largest, StrategyKind::varfit_supply);
    const auto& bis = report.problem(name, largest).bisection;
    std::vector<SizeHistoryRow> history;
    for (const auto& [gen, n] : cell.result.records.front().size_history)
      history.push_back({gen, n, cell.static_size, bis.mean_min_popsize});
    write_size_history_csv(out_dir / ("size_history_" + name + (name == "trap4" ? "_" : "") +
                                      std::to_string(largest) + ".csv"),
                           history);
  }
  write_bisection_csv(out_dir / "bisection.csv", bisection_rows);
  write_speedup_csv(out_dir / "speedup.csv", speedup_rows);
  return report;
}

}  // namespace popsize
