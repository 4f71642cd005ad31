#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fuzzybso/optimizer.hpp"

namespace fuzzybso {

enum class BsoMode { Plain, Ewma };

struct BsoParams {
  std::size_t q = 50;          // population size
  std::size_t k = 5;           // clusters
  int max_iterations = 500;    // NC_max
  double slope = 20.0;         // logsig slope divisor K
  double e = 0.8;              // EWMA smoothing, (0, 1]
  double theta = 0.5;          // EWMA noise scale
  double mu = 0.0;             // noise mean
  double sigma = 1.0;          // noise standard deviation
  double p_replace = 0.2;
  double p_one_cluster = 0.8;
  double p_use_center = 0.4;
  double p_use_center_two = 0.5;
  std::uint64_t seed = 1;
  BsoMode mode = BsoMode::Ewma;
  int stagnation = 50;         // iterations without improvement before stopping; <= 0 disables

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

struct Clustering {
  std::vector<std::vector<std::size_t>> members;  // population indices per cluster
  std::vector<std::size_t> centers;               // best-fitness member of each cluster
};

/// k-means over genotypes (Euclidean, at most 10 refinement passes) seeded
/// with k distinct members. An emptied cluster takes the worst-fitness member
/// of a cluster that can spare one.
Clustering cluster(const Population& pop, std::size_t k, Rng& rng);

double logsig(double x);

/// s * logsig((NC_max / 2 - NC) / K).
double step_size(int iteration, const BsoParams& params, double s);

/// lambda * x1 + (1 - lambda) * x2.
Genotype blend(std::span<const double> x1, std::span<const double> x2, double lambda);

/// e * base + (1 - e) * previous.
Genotype ewma_update(std::span<const double> base, std::span<const double> previous, double e);

/// Picks a base point: one cluster (center or random member) with probability
/// p_one_cluster, otherwise a random blend of two clusters' points.
Genotype select_base(const Population& pop, const Clustering& clusters, const BsoParams& params, Rng& rng);

/// With probability p_replace, overwrites one random cluster center with a
/// fresh genotype (left unevaluated). Returns the replaced index, if any.
std::optional<std::size_t> maybe_replace_center(Population& pop, const Clustering& clusters,
                                                const BsoParams& params, const GenotypeSpec& spec, Rng& rng);

struct Candidate {
  Genotype genotype;
  Genotype ewma;
};

/// Plain: base + xi * N(mu, sigma). EWMA: E' = e base + (1 - e) E, then
/// E' + theta * N(mu, sigma). Both modes draw the same random numbers; the
/// result is clamped into the spec's box.
Candidate generate_candidate(std::span<const double> base, std::span<const double> ewma, int iteration,
                             const BsoParams& params, const GenotypeSpec& spec, Rng& rng);

/// Brain storm optimization with greedy per-slot replacement.
RunResult run_bso(const BsoParams& params, const FitnessFunction& fitness, const GenotypeSpec& spec);

}  // namespace fuzzybso
