#pragma once

#include <cstdint>

#include "popsize/rng.hpp"
#include "popsize/theory.hpp"

namespace popsize {

/// Trials are split into fixed-size chunks, chunk c drawing from
/// derive_seed(seed, {c}); the result does not depend on the thread count.
inline constexpr std::uint64_t kWalkChunk = 4096;

/// Runs one absorbing walk from an integer start; true when absorbed at n.
/// Steps are drawn in exact blocks rather than one at a time.
bool walk_once(long n, long x0, double p, Rng& rng);

/// Successes among `trials` walks (OpenMP over chunks).
std::uint64_t walk_successes(const WalkSpec& walk, std::uint64_t trials, std::uint64_t seed);
/// Serial reference of walk_successes; bit-identical output.
std::uint64_t walk_successes_serial(const WalkSpec& walk, std::uint64_t trials, std::uint64_t seed);

/// Empirical probability of absorbing at n. Requires an integer-valued x0.
double simulate_walk(const WalkSpec& walk, std::uint64_t trials, std::uint64_t seed);
double simulate_walk_serial(const WalkSpec& walk, std::uint64_t trials, std::uint64_t seed);

}  // namespace popsize
