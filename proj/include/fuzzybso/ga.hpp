#pragma once

#include <cstddef>
#include <cstdint>

#include "fuzzybso/optimizer.hpp"

namespace fuzzybso {

/// Generational GA used as the comparison baseline (AGFS stand-in).
struct GaParams {
  std::size_t population = 50;
  int generations = 500;
  std::size_t tournament = 3;
  double crossover = 0.9;       // probability a child is a uniform crossover
  double mutation = 0.05;       // per-gene mutation probability
  double mutation_sigma = 0.3;  // gaussian step for a mutated gene
  std::uint64_t seed = 1;
  int stagnation = 50;          // <= 0 disables

  void validate() const;
};

/// Tournament selection, uniform crossover, clamped gaussian mutation and an
/// elite of one. Same trace format and determinism contract as run_bso.
RunResult run_ga(const GaParams& params, const FitnessFunction& fitness, const GenotypeSpec& spec);

}  // namespace fuzzybso
