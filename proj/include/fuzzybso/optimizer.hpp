#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzybso/fitness.hpp"
#include "fuzzybso/genotype.hpp"
#include "fuzzybso/random.hpp"

namespace fuzzybso {

/// What an objective reports for one genotype. `value` is maximized; the
/// breakdown carries the rule-base terms when the objective has them.
struct Evaluation {
  double value = 0.0;
  FitnessBreakdown breakdown;
};

using FitnessFunction = std::function<Evaluation(std::span<const double>)>;

struct Individual {
  Genotype genotype;
  std::optional<Evaluation> fitness;
  Genotype ewma;  // smoothed base point; EWMA mode only

  double value() const { return fitness ? fitness->value : -std::numeric_limits<double>::infinity(); }
};

using Population = std::vector<Individual>;

struct TraceRecord {
  int iteration = 0;
  double best = 0.0;
  double mean = 0.0;
  FitnessBreakdown best_terms;
  std::size_t evaluations = 0;
  double elapsed_ms = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;

  bool monotone() const;
  /// iteration,best_G,mean_G,g1,g2,g3,evaluations,elapsed_ms. With
  /// `wall_clock` false the elapsed column is written as 0 so that traces
  /// from identical runs compare byte-for-byte.
  void write_csv(std::ostream& out, bool wall_clock = true) const;
};

struct RunResult {
  Individual best;
  ConvergenceTrace trace;
};

/// Raised when the objective throws; names the iteration it failed in.
class OptimizerError : public std::runtime_error {
 public:
  OptimizerError(int iteration, const std::string& what);
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// Uniform sample inside the spec's box.
Genotype random_genotype(const GenotypeSpec& spec, Rng& rng);

/// q uniform genotypes with their EWMA state set to the genotype itself.
Population initialize(std::size_t q, const GenotypeSpec& spec, Rng& rng);

namespace detail {

/// Evaluates `fn`, rethrowing failures as OptimizerError(iteration).
Evaluation evaluate(const FitnessFunction& fn, std::span<const double> genes, int iteration);

/// Bookkeeping shared by the optimizers' main loops.
class TraceRecorder {
 public:
  TraceRecorder();
  /// Appends a record for the population and returns true when the all-time
  /// best improved by more than the stagnation tolerance.
  bool record(int iteration, const Population& pop, std::size_t evaluations);
  const Individual& best() const { return best_; }
  ConvergenceTrace take() { return std::move(trace_); }

 private:
  std::chrono::steady_clock::time_point start_;
  Individual best_;
  ConvergenceTrace trace_;
};

}  // namespace detail

}  // namespace fuzzybso
