#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace fuzzybso {

/// Seeded random stream with distributions implemented in-house so that
/// results do not depend on the standard library's distribution algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform real in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);
  bool bernoulli(double p) { return uniform() < p; }
  /// Box-Muller; consumes exactly two uniforms per call.
  double normal(double mean, double stddev);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; derives independent child seeds from (seed, salt).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace fuzzybso
