#include "fuzzybso/optimizer.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace fuzzybso {

void GenotypeSpec::clamp(std::span<double> genes) const {
  for (std::size_t i = 0; i < genes.size(); ++i) genes[i] = std::clamp(genes[i], bounds[i].lo, bounds[i].hi);
}

bool GenotypeSpec::contains(std::span<const double> genes) const {
  if (genes.size() != bounds.size()) return false;
  for (std::size_t i = 0; i < genes.size(); ++i) {
    if (!(genes[i] >= bounds[i].lo && genes[i] <= bounds[i].hi)) return false;
  }
  return true;
}

GenotypeSpec GenotypeSpec::box(std::size_t length, double lo, double hi) {
  return GenotypeSpec{std::vector<GeneBounds>(length, GeneBounds{lo, hi})};
}

bool ConvergenceTrace::monotone() const {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].best < records[i - 1].best) return false;
  }
  return true;
}

void ConvergenceTrace::write_csv(std::ostream& out, bool wall_clock) const {
  out << "iteration,best_G,mean_G,g1,g2,g3,evaluations,elapsed_ms\n";
  for (const auto& r : records) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.3f}\n", r.iteration, r.best, r.mean,
                       r.best_terms.g1, r.best_terms.g2, r.best_terms.g3, r.evaluations,
                       wall_clock ? r.elapsed_ms : 0.0);
  }
}

OptimizerError::OptimizerError(int iteration, const std::string& what)
    : std::runtime_error(fmt::format("objective failed at iteration {}: {}", iteration, what)),
      iteration_(iteration) {}

Genotype random_genotype(const GenotypeSpec& spec, Rng& rng) {
  Genotype g(spec.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = rng.uniform(spec.bounds[i].lo, spec.bounds[i].hi);
  return g;
}

Population initialize(std::size_t q, const GenotypeSpec& spec, Rng& rng) {
  if (spec.size() == 0) throw std::invalid_argument("genotype length must be at least 1");
  Population pop(q);
  for (auto& ind : pop) {
    ind.genotype = random_genotype(spec, rng);
    ind.ewma = ind.genotype;
  }
  return pop;
}

namespace detail {

Evaluation evaluate(const FitnessFunction& fn, std::span<const double> genes, int iteration) {
  try {
    return fn(genes);
  } catch (const OptimizerError&) {
    throw;
  } catch (const std::exception& e) {
    throw OptimizerError(iteration, e.what());
  }
}

TraceRecorder::TraceRecorder() : start_(std::chrono::steady_clock::now()) {}

bool TraceRecorder::record(int iteration, const Population& pop, std::size_t evaluations) {
  const Individual* top = &pop.front();
  double sum = 0.0;
  for (const auto& ind : pop) {
    sum += ind.value();
    if (ind.value() > top->value()) top = &ind;
  }
  const double previous = best_.value();
  const bool improved = !best_.fitness || top->value() > previous + 1e-9;
  if (!best_.fitness || top->value() > previous) best_ = *top;

  TraceRecord rec;
  rec.iteration = iteration;
  rec.best = best_.value();
  rec.mean = sum / static_cast<double>(pop.size());
  rec.best_terms = best_.fitness->breakdown;
  rec.evaluations = evaluations;
  rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  trace_.records.push_back(rec);
  return improved;
}

}  // namespace detail

}  // namespace fuzzybso
