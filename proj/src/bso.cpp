#include "fuzzybso/bso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace fuzzybso {

namespace {

constexpr int kMaxKmeansPasses = 10;

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(fmt::format("{}={} must lie in [0, 1]", name, p));
}

std::size_t pick_member(const std::vector<std::size_t>& members, Rng& rng) {
  return members[rng.index(members.size())];
}

}  // namespace

void BsoParams::validate() const {
  if (q < 1) throw std::invalid_argument("q must be >= 1");
  if (k < 1 || k > q) throw std::invalid_argument(fmt::format("k={} must satisfy 1 <= k <= q={}", k, q));
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
  if (!(slope > 0.0)) throw std::invalid_argument("slope K must be > 0");
  if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument(fmt::format("e={} must lie in (0, 1]", e));
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
  check_probability(p_replace, "p_replace");
  check_probability(p_one_cluster, "p_one_cluster");
  check_probability(p_use_center, "p_use_center");
  check_probability(p_use_center_two, "p_use_center_two");
}

Clustering cluster(const Population& pop, std::size_t k, Rng& rng) {
  const std::size_t q = pop.size();
  if (k < 1 || k > q) throw std::invalid_argument(fmt::format("cannot form {} clusters from {} members", k, q));

  std::vector<std::size_t> order(q);
  for (std::size_t i = 0; i < q; ++i) order[i] = i;
  std::vector<Genotype> centroids(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::swap(order[j], order[j + rng.index(q - j)]);
    centroids[j] = pop[order[j]].genotype;
  }

  std::vector<std::size_t> assignment(q, k);
  for (int pass = 0; pass < kMaxKmeansPasses; ++pass) {
    std::vector<std::size_t> next(q);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < q; ++i) {
      std::size_t nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        const double d = squared_distance(pop[i].genotype, centroids[j]);
        if (d < best) {
          best = d;
          nearest = j;
        }
      }
      next[i] = nearest;
      ++sizes[nearest];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (sizes[j] != 0) continue;
      std::size_t worst = q;
      for (std::size_t i = 0; i < q; ++i) {
        if (sizes[next[i]] < 2) continue;
        if (worst == q || pop[i].value() < pop[worst].value()) worst = i;
      }
      --sizes[next[worst]];
      next[worst] = j;
      sizes[j] = 1;
    }
    const bool converged = next == assignment;
    assignment = std::move(next);
    if (converged) break;
    for (std::size_t j = 0; j < k; ++j) std::fill(centroids[j].begin(), centroids[j].end(), 0.0);
    for (std::size_t i = 0; i < q; ++i) {
      auto& c = centroids[assignment[i]];
      for (std::size_t g = 0; g < c.size(); ++g) c[g] += pop[i].genotype[g];
    }
    for (std::size_t j = 0; j < k; ++j) {
      for (auto& v : centroids[j]) v /= static_cast<double>(sizes[j]);
    }
  }

  Clustering out;
  out.members.resize(k);
  for (std::size_t i = 0; i < q; ++i) out.members[assignment[i]].push_back(i);
  out.centers.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& members = out.members[j];
    out.centers[j] = *std::max_element(members.begin(), members.end(), [&pop](std::size_t a, std::size_t b) {
      // Strict comparison keeps the lowest index among equals.
      return pop[a].value() < pop[b].value();
    });
  }
  return out;
}

double logsig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double step_size(int iteration, const BsoParams& params, double s) {
  return s * logsig((0.5 * params.max_iterations - iteration) / params.slope);
}

Genotype blend(std::span<const double> x1, std::span<const double> x2, double lambda) {
  Genotype out(x1.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lambda * x1[i] + (1.0 - lambda) * x2[i];
  return out;
}

Genotype ewma_update(std::span<const double> base, std::span<const double> previous, double e) {
  Genotype out(base.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = e * base[i] + (1.0 - e) * previous[i];
  return out;
}

Genotype select_base(const Population& pop, const Clustering& clusters, const BsoParams& params, Rng& rng) {
  const std::size_t k = clusters.members.size();
  if (k == 0) throw std::invalid_argument("select_base needs at least one cluster");
  if (k == 1 || rng.uniform() < params.p_one_cluster) {
    // Cluster chosen with probability proportional to its size.
    const std::size_t slot = rng.index(pop.size());
    std::size_t j = 0;
    for (std::size_t seen = 0; j < k; ++j) {
      seen += clusters.members[j].size();
      if (slot < seen) break;
    }
    j = std::min(j, k - 1);
    if (rng.uniform() < params.p_use_center) return pop[clusters.centers[j]].genotype;
    return pop[pick_member(clusters.members[j], rng)].genotype;
  }
  const std::size_t a = rng.index(k);
  std::size_t b = rng.index(k - 1);
  if (b >= a) ++b;
  const bool centers = rng.uniform() < params.p_use_center_two;
  const std::size_t ia = centers ? clusters.centers[a] : pick_member(clusters.members[a], rng);
  const std::size_t ib = centers ? clusters.centers[b] : pick_member(clusters.members[b], rng);
  return blend(pop[ia].genotype, pop[ib].genotype, rng.uniform());
}

std::optional<std::size_t> maybe_replace_center(Population& pop, const Clustering& clusters,
                                                const BsoParams& params, const GenotypeSpec& spec, Rng& rng) {
  if (!(rng.uniform() < params.p_replace)) return std::nullopt;
  const std::size_t target = clusters.centers[rng.index(clusters.centers.size())];
  // The population's best member is never discarded.
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i) {
    if (pop[i].value() > pop[best].value()) best = i;
  }
  if (target == best) return std::nullopt;
  pop[target].genotype = random_genotype(spec, rng);
  pop[target].ewma = pop[target].genotype;
  pop[target].fitness.reset();
  return target;
}

Candidate generate_candidate(std::span<const double> base, std::span<const double> ewma, int iteration,
                             const BsoParams& params, const GenotypeSpec& spec, Rng& rng) {
  const double xi = step_size(iteration, params, rng.uniform());
  Candidate out;
  if (params.mode == BsoMode::Plain) {
    out.genotype.assign(base.begin(), base.end());
    for (auto& g : out.genotype) g += xi * rng.normal(params.mu, params.sigma);
    out.ewma.assign(ewma.begin(), ewma.end());
  } else {
    out.ewma = ewma_update(base, ewma, params.e);
    out.genotype = out.ewma;
    for (auto& g : out.genotype) g += params.theta * rng.normal(params.mu, params.sigma);
  }
  spec.clamp(out.genotype);
  return out;
}

RunResult run_bso(const BsoParams& params, const FitnessFunction& fitness, const GenotypeSpec& spec) {
  params.validate();
  Rng rng(params.seed);
  detail::TraceRecorder recorder;

  Population pop = initialize(params.q, spec, rng);
  std::size_t evaluations = 0;
  for (auto& ind : pop) {
    ind.fitness = detail::evaluate(fitness, ind.genotype, 0);
    ++evaluations;
  }
  recorder.record(0, pop, evaluations);

  int last_improvement = 0;
  for (int nc = 1; nc <= params.max_iterations; ++nc) {
    const Clustering clusters = cluster(pop, params.k, rng);
    if (const auto replaced = maybe_replace_center(pop, clusters, params, spec, rng)) {
      pop[*replaced].fitness = detail::evaluate(fitness, pop[*replaced].genotype, nc);
      ++evaluations;
    }

    // Variation consumes the random stream in slot order; evaluation and
    // replacement follow once every candidate exists.
    std::vector<Candidate> candidates;
    candidates.reserve(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
      const Genotype base = select_base(pop, clusters, params, rng);
      candidates.push_back(generate_candidate(base, pop[i].ewma, nc, params, spec, rng));
    }
    for (std::size_t i = 0; i < pop.size(); ++i) {
      const Evaluation ev = detail::evaluate(fitness, candidates[i].genotype, nc);
      ++evaluations;
      pop[i].ewma = std::move(candidates[i].ewma);
      if (ev.value >= pop[i].value()) {
        pop[i].genotype = std::move(candidates[i].genotype);
        pop[i].fitness = ev;
      }
    }

    if (recorder.record(nc, pop, evaluations)) last_improvement = nc;
    if (params.stagnation > 0 && nc - last_improvement >= params.stagnation) break;
  }

  RunResult result;
  result.best = recorder.best();
  result.trace = recorder.take();
  return result;
}

}  // namespace fuzzybso
