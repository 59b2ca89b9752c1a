#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "popsize/theory.hpp"

namespace popsize {

enum class StrategyKind { static_size, varfit, varfit_supply };

/// CLI tokens: "static", "varfit", "varfit-supply".
std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy(std::string_view token);

/// What a strategy sees of the current generation.
struct SizingObservation {
  double fitness_variance = 0.0;
  std::vector<std::size_t> bb_counts;
  int current_n = 0;
};

struct SizeDecision {
  int n = kMinPopulation;
  bool capped = false;  // the raw estimate exceeded the cap
};

/// Count at ascending-sorted index floor(alpha * m).
std::size_t percentile_supply(std::span<const std::size_t> bb_counts, double alpha);

class SizingStrategy {
 public:
  /// cap == 0 selects the default of twice the static size.
  SizingStrategy(StrategyKind kind, TheoryParams params, int cap = 0);

  /// Static strategy pinned to an explicit size instead of the model's.
  static SizingStrategy fixed(TheoryParams params, int n);

  StrategyKind kind() const { return kind_; }
  const TheoryParams& params() const { return params_; }
  int cap() const { return cap_; }
  std::optional<int> fixed_size() const { return fixed_; }

  int initial_size() const;
  SizeDecision decide(const SizingObservation& obs) const;
  int next_size(const SizingObservation& obs) const { return decide(obs).n; }

 private:
  StrategyKind kind_;
  TheoryParams params_;
  int cap_;
  std::optional<int> fixed_;
};

}  // namespace popsize
