#pragma once

#include <cstdint>
#include <limits>

#include "popsize/problem.hpp"

namespace popsize {

inline constexpr int kMinPopulation = 4;

/// Symbols feeding the decision, gambler's ruin and sizing equations.
struct TheoryParams {
  unsigned k = 1;
  std::size_t m = 2;
  double d = 1.0;
  double sigma_bb = 0.5;
  double alpha = 0.05;

  /// Throws InvalidParameter unless alpha in (0,1), d > 0, sigma_bb > 0, m >= 1.
  void validate() const;

  static TheoryParams from_problem(const ProblemSpec& problem, double alpha);
};

/// Absorbing random walk on [0, n] started at x0, stepping right with probability p.
struct WalkSpec {
  long n = 2;
  double x0 = 1.0;
  double p = 0.5;

  void validate() const;
};

double std_normal_cdf(double z);

/// Probability that selection prefers the building block over its toughest
/// competitor when the rest of the string contributes (m-1)*sigma_bb^2 noise.
double p_decide_model(const TheoryParams& params);

/// Same decision probability from a measured variance. Saturates at 1 - 1e-12
/// for a (numerically) converged population.
double p_decide_from_variance(double d, double sigma_m_sq);

/// Gambler's ruin probability of absorbing at n.
double gr_success(const WalkSpec& walk);

/// Rounds up to the next even integer and clamps to [4, cap].
int round_population(double n, int cap = std::numeric_limits<int>::max());

/// Population size of the gambler's ruin model before rounding.
double size_static_real(const TheoryParams& params);
int size_static(const TheoryParams& params);

/// n = ln(alpha) / (supply_fraction * ln((1-p)/p)); with supply_fraction = 2^-k
/// this is the per-generation gambler's ruin size.
double size_from_p_real(unsigned k, double alpha, double p, double supply_fraction);
int size_from_p(unsigned k, double alpha, double p, double supply_fraction,
                int cap = std::numeric_limits<int>::max());

}  // namespace popsize
