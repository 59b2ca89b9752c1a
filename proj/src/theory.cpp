#include "popsize/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "popsize/errors.hpp"

namespace popsize {

namespace {
constexpr double kVarianceEpsilon = 1e-12;
constexpr double kSaturatedP = 1.0 - 1e-12;
constexpr double kSymmetricTolerance = 1e-12;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must lie strictly between 0 and 1");
}
}  // namespace

void TheoryParams::validate() const {
  check_alpha(alpha);
  if (!(d > 0.0)) throw InvalidParameter("signal d must be positive");
  if (!(sigma_bb > 0.0)) throw InvalidParameter("sigma_bb must be positive");
  if (m < 1) throw InvalidParameter("at least one partition is required");
  if (k < 1 || k > kMaxPartitionBits) throw InvalidParameter("building block size out of range");
}

TheoryParams TheoryParams::from_problem(const ProblemSpec& problem, double alpha) {
  TheoryParams p{problem.k(), problem.m(), problem.stats().d, std::sqrt(problem.stats().sigma_bb_sq), alpha};
  p.validate();
  return p;
}

void WalkSpec::validate() const {
  if (n < 2) throw InvalidParameter("walk barrier n must be at least 2");
  if (!(x0 > 0.0 && x0 < static_cast<double>(n))) throw InvalidParameter("walk start must lie strictly inside (0, n)");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidParameter("step probability must lie in (0, 1]");
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double p_decide_model(const TheoryParams& params) {
  params.validate();
  if (params.m < 2) throw InvalidParameter("the decision model needs m >= 2");
  const double noise = std::sqrt(2.0 * static_cast<double>(params.m - 1)) * params.sigma_bb;
  return std_normal_cdf(params.d / noise);
}

double p_decide_from_variance(double d, double sigma_m_sq) {
  if (!(d > 0.0)) throw InvalidParameter("signal d must be positive");
  if (!(sigma_m_sq > kVarianceEpsilon)) return kSaturatedP;
  return std::min(kSaturatedP, std_normal_cdf(d / std::sqrt(2.0 * sigma_m_sq)));
}

double gr_success(const WalkSpec& walk) {
  walk.validate();
  const double n = static_cast<double>(walk.n);
  if (std::abs(walk.p - 0.5) < kSymmetricTolerance) return walk.x0 / n;
  // (1 - r^x0) / (1 - r^n) with r = q/p, written with expm1 to stay accurate near p = 1/2.
  const double log_r = std::log1p((1.0 - 2.0 * walk.p) / walk.p);
  if (std::isinf(log_r)) return 1.0;
  return std::expm1(walk.x0 * log_r) / std::expm1(n * log_r);
}

int round_population(double n, int cap) {
  if (cap < kMinPopulation) cap = kMinPopulation;
  if (std::isnan(n)) throw InvalidParameter("population size is not a number");
  if (n >= static_cast<double>(cap)) return cap % 2 == 0 ? cap : cap - 1;
  long long up = static_cast<long long>(std::ceil(n));
  if (up % 2 != 0) ++up;
  if (up < kMinPopulation) up = kMinPopulation;
  if (up > cap) up = cap % 2 == 0 ? cap : cap - 1;
  return static_cast<int>(up);
}

double size_static_real(const TheoryParams& params) {
  params.validate();
  return -std::ldexp(1.0, static_cast<int>(params.k) - 1) * std::log(params.alpha) * params.sigma_bb *
         std::sqrt(std::numbers::pi * static_cast<double>(params.m - 1)) / params.d;
}

int size_static(const TheoryParams& params) { return round_population(size_static_real(params)); }

double size_from_p_real(unsigned k, double alpha, double p, double supply_fraction) {
  check_alpha(alpha);
  if (!(p > 0.5 && p <= 1.0)) throw InvalidParameter("decision probability must exceed 1/2");
  if (!(supply_fraction >= std::ldexp(1.0, -static_cast<int>(k)) && supply_fraction <= 1.0))
    throw InvalidParameter("supply fraction must lie in [2^-k, 1]");
  const double log_ratio = std::log((1.0 - p) / p);
  return std::log(alpha) / (supply_fraction * log_ratio);
}

int size_from_p(unsigned k, double alpha, double p, double supply_fraction, int cap) {
  return round_population(size_from_p_real(k, alpha, p, supply_fraction), cap);
}

}  // namespace popsize
