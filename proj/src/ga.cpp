#include "fuzzybso/ga.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace fuzzybso {

void GaParams::validate() const {
  if (population < 1) throw std::invalid_argument("population must be >= 1");
  if (generations < 0) throw std::invalid_argument("generations must be >= 0");
  if (tournament < 1) throw std::invalid_argument("tournament must be >= 1");
  if (!(crossover >= 0.0 && crossover <= 1.0)) {
    throw std::invalid_argument(fmt::format("crossover={} must lie in [0, 1]", crossover));
  }
  if (!(mutation >= 0.0 && mutation <= 1.0)) {
    throw std::invalid_argument(fmt::format("mutation={} must lie in [0, 1]", mutation));
  }
  if (!(mutation_sigma >= 0.0)) throw std::invalid_argument("mutation_sigma must be >= 0");
}

namespace {

const Individual& tournament(const Population& pop, std::size_t size, Rng& rng) {
  const Individual* winner = &pop[rng.index(pop.size())];
  for (std::size_t t = 1; t < size; ++t) {
    const Individual& challenger = pop[rng.index(pop.size())];
    if (challenger.value() > winner->value()) winner = &challenger;
  }
  return *winner;
}

}  // namespace

RunResult run_ga(const GaParams& params, const FitnessFunction& fitness, const GenotypeSpec& spec) {
  params.validate();
  Rng rng(params.seed);
  detail::TraceRecorder recorder;

  Population pop = initialize(params.population, spec, rng);
  std::size_t evaluations = 0;
  for (auto& ind : pop) {
    ind.fitness = detail::evaluate(fitness, ind.genotype, 0);
    ++evaluations;
  }
  recorder.record(0, pop, evaluations);

  int last_improvement = 0;
  for (int gen = 1; gen <= params.generations; ++gen) {
    std::size_t elite = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
      if (pop[i].value() > pop[elite].value()) elite = i;
    }

    Population next;
    next.reserve(pop.size());
    next.push_back(pop[elite]);
    while (next.size() < pop.size()) {
      const Individual& a = tournament(pop, params.tournament, rng);
      const Individual& b = tournament(pop, params.tournament, rng);
      Individual child;
      child.genotype = a.genotype;
      if (rng.uniform() < params.crossover) {
        for (std::size_t g = 0; g < child.genotype.size(); ++g) {
          if (rng.uniform() < 0.5) child.genotype[g] = b.genotype[g];
        }
      }
      for (auto& g : child.genotype) {
        if (rng.uniform() < params.mutation) g += rng.normal(0.0, params.mutation_sigma);
      }
      spec.clamp(child.genotype);
      child.ewma = child.genotype;
      next.push_back(std::move(child));
    }
    for (std::size_t i = 1; i < next.size(); ++i) {
      next[i].fitness = detail::evaluate(fitness, next[i].genotype, gen);
      ++evaluations;
    }
    pop = std::move(next);

    if (recorder.record(gen, pop, evaluations)) last_improvement = gen;
    if (params.stagnation > 0 && gen - last_improvement >= params.stagnation) break;
  }

  RunResult result;
  result.best = recorder.best();
  result.trace = recorder.take();
  return result;
}

}  // namespace fuzzybso
