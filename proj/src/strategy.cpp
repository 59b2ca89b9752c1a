#include "popsize/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "popsize/errors.hpp"

namespace popsize {

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::static_size:
      return "static";
    case StrategyKind::varfit:
      return "varfit";
    case StrategyKind::varfit_supply:
      return "varfit-supply";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view token) {
  if (token == "static") return StrategyKind::static_size;
  if (token == "varfit") return StrategyKind::varfit;
  if (token == "varfit-supply") return StrategyKind::varfit_supply;
  throw InvalidParameter("unknown strategy '" + std::string(token) + "'");
}

std::size_t percentile_supply(std::span<const std::size_t> bb_counts, double alpha) {
  if (bb_counts.empty()) throw InvalidParameter("percentile of an empty count list");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must lie strictly between 0 and 1");
  std::vector<std::size_t> sorted(bb_counts.begin(), bb_counts.end());
  const auto index = std::min(sorted.size() - 1,
                              static_cast<std::size_t>(std::floor(alpha * static_cast<double>(sorted.size()))));
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(index), sorted.end());
  return sorted[index];
}

SizingStrategy::SizingStrategy(StrategyKind kind, TheoryParams params, int cap)
    : kind_(kind), params_(params), cap_(cap) {
  params_.validate();
  if (cap_ == 0) cap_ = 2 * size_static(params_);
  if (cap_ < kMinPopulation || cap_ % 2 != 0) throw InvalidParameter("cap must be even and at least 4");
}

SizingStrategy SizingStrategy::fixed(TheoryParams params, int n) {
  if (n < kMinPopulation || n % 2 != 0) throw InvalidParameter("fixed population size must be even and at least 4");
  SizingStrategy s(StrategyKind::static_size, params);
  s.fixed_ = n;
  return s;
}

int SizingStrategy::initial_size() const { return fixed_ ? *fixed_ : size_static(params_); }

SizeDecision SizingStrategy::decide(const SizingObservation& obs) const {
  if (kind_ == StrategyKind::static_size) return {obs.current_n, false};
  if (obs.bb_counts.size() != params_.m) throw InvalidParameter("observation has the wrong number of partitions");
  if (obs.current_n < kMinPopulation) throw InvalidParameter("observation population below the minimum");

  const double p = p_decide_from_variance(params_.d, obs.fitness_variance);
  if (!(p > 0.5)) return {cap_, true};

  const double base = std::ldexp(1.0, -static_cast<int>(params_.k));
  double supply = base;
  if (kind_ == StrategyKind::varfit_supply) {
    const auto c = percentile_supply(obs.bb_counts, params_.alpha);
    supply = std::max(base, static_cast<double>(c) / static_cast<double>(obs.current_n));
  }
  const double raw = size_from_p_real(params_.k, params_.alpha, p, supply);
  return {round_population(raw, cap_), raw > static_cast<double>(cap_)};
}

}  // namespace popsize
