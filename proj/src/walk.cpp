#include "popsize/walk.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "popsize/errors.hpp"

namespace popsize {

namespace {

// log(j!) for j in [0, n].
std::vector<double> log_factorials(long n) {
  std::vector<double> t(static_cast<std::size_t>(n) + 1, 0.0);
  for (long j = 2; j <= n; ++j) t[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(j) - 1] + std::log(j);
  return t;
}

// C(b, j1) / C(b, j0), both indices in [0, b].
double binomial_ratio(const std::vector<double>& lf, long b, long j1, long j0) {
  auto at = [&](long j) { return lf[static_cast<std::size_t>(j)]; };
  return std::exp(at(j0) + at(b - j0) - at(j1) - at(b - j1));
}

// One walk in blocks. From x, a block of b = max(x, n-x) - 1 steps cannot reach
// the far barrier. Its displacement s = 2*Binomial(b, p) - b is exact; given s,
// the chance that the path touched the near barrier at distance a follows from
// the reflection principle: #paths to s touching a = #paths to 2a - s.
class BlockSampler {
 public:
  BlockSampler(long n, double p) : p_(p), lf_(log_factorials(n)), by_length_(static_cast<std::size_t>(n)) {}

  double p() const { return p_; }
  const std::vector<double>& log_factorial() const { return lf_; }

  long up_steps(long b, Rng& rng) {
    auto& d = by_length_[static_cast<std::size_t>(b)];
    if (!d) d.emplace(b, p_);
    return (*d)(rng);
  }

 private:
  double p_;
  std::vector<double> lf_;
  std::vector<std::optional<std::binomial_distribution<long>>> by_length_;
};

bool walk_blocks(long n, long x, BlockSampler& sampler, Rng& rng) {
  const double p = sampler.p();
  const auto& lf = sampler.log_factorial();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (x > 0 && x < n) {
    const bool near_top = x >= n - x;
    const long b = (near_top ? x : n - x) - 1;
    if (b == 0) {
      x += unit(rng) < p ? 1 : -1;
      continue;
    }
    const long s = 2 * sampler.up_steps(b, rng) - b;
    if (near_top) {
      const long a = n - x;
      if (s >= a) return true;
      const long j1 = (b + 2 * a - s) / 2;  // up-steps of the reflected path
      if (j1 <= b && unit(rng) < binomial_ratio(lf, b, j1, (b + s) / 2)) return true;
    } else {
      const long a = x;
      if (s <= -a) return false;
      const long j1 = (b - 2 * a - s) / 2;
      if (j1 >= 0 && unit(rng) < binomial_ratio(lf, b, j1, (b + s) / 2)) return false;
    }
    x += s;
  }
  return x >= n;
}

long checked_start(const WalkSpec& walk) {
  walk.validate();
  if (walk.x0 != std::floor(walk.x0)) throw InvalidParameter("walk simulation needs an integer start");
  return static_cast<long>(walk.x0);
}

std::uint64_t chunk_successes(const WalkSpec& walk, long x0, std::uint64_t trials, std::uint64_t seed,
                              std::uint64_t chunk) {
  Rng rng(derive_seed(seed, {chunk}));
  const std::uint64_t begin = chunk * kWalkChunk;
  const std::uint64_t end = std::min(trials, begin + kWalkChunk);
  if (walk.p >= 1.0) return end - begin;
  BlockSampler sampler(walk.n, walk.p);
  std::uint64_t wins = 0;
  for (std::uint64_t t = begin; t < end; ++t) wins += walk_blocks(walk.n, x0, sampler, rng) ? 1 : 0;
  return wins;
}

}  // namespace

bool walk_once(long n, long x0, double p, Rng& rng) {
  const WalkSpec spec{n, static_cast<double>(x0), p};
  spec.validate();
  if (p >= 1.0) return true;
  BlockSampler sampler(n, p);
  return walk_blocks(n, x0, sampler, rng);
}

std::uint64_t walk_successes(const WalkSpec& walk, std::uint64_t trials, std::uint64_t seed) {
  const long x0 = checked_start(walk);
  const auto chunks = static_cast<long long>((trials + kWalkChunk - 1) / kWalkChunk);
  std::uint64_t wins = 0;
#pragma omp parallel for reduction(+ : wins) schedule(dynamic)
  for (long long c = 0; c < chunks; ++c)
    wins += chunk_successes(walk, x0, trials, seed, static_cast<std::uint64_t>(c));
  return wins;
}

std::uint64_t walk_successes_serial(const WalkSpec& walk, std::uint64_t trials, std::uint64_t seed) {
  const long x0 = checked_start(walk);
  const std::uint64_t chunks = (trials + kWalkChunk - 1) / kWalkChunk;
  std::uint64_t wins = 0;
  for (std::uint64_t c = 0; c < chunks; ++c) wins += chunk_successes(walk, x0, trials, seed, c);
  return wins;
}

double simulate_walk(const WalkSpec& walk, std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw InvalidParameter("at least one trial is required");
  return static_cast<double>(walk_successes(walk, trials, seed)) / static_cast<double>(trials);
}

double simulate_walk_serial(const WalkSpec& walk, std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw InvalidParameter("at least one trial is required");
  return static_cast<double>(walk_successes_serial(walk, trials, seed)) / static_cast<double>(trials);
}

}  // namespace popsize
