#include "fuzzybso/fitness.hpp"

#include <algorithm>
#include <stdexcept>

namespace fuzzybso {

FitnessWeights::FitnessWeights(double alpha, double beta, double gamma) {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0) throw std::invalid_argument("fitness weights must be non-negative");
  const double sum = alpha + beta + gamma;
  if (!(sum > 0.0)) throw std::invalid_argument("fitness weights must not all be zero");
  alpha_ = alpha / sum;
  beta_ = beta / sum;
  gamma_ = gamma / sum;
}

std::size_t match_count(const Rule& rule, const LabeledDataset& ld) {
  std::size_t count = 0;
  const bool conjunctive = rule.connective == Connective::And;
  for (std::size_t i = 0; i < ld.n; ++i) {
    const auto rec = ld.record(i);
    bool matched = conjunctive;
    for (std::size_t j = 0; j < ld.m; ++j) {
      const int a = rule.antecedents[j];
      if (a == 0) continue;
      const bool hit = rec[j] == a;
      if (conjunctive && !hit) {
        matched = false;
        break;
      }
      if (!conjunctive && hit) {
        matched = true;
        break;
      }
    }
    if (matched) ++count;
  }
  return count;
}

double g1(const RuleSet& rs) {
  if (rs.rules.empty()) throw std::invalid_argument("g1 needs at least one rule");
  long total = 0;
  for (const auto& rule : rs.rules) total += rule.length();
  return 1.0 - static_cast<double>(total) / (static_cast<double>(rs.rules.size()) * rs.m);
}

double g2(const RuleSet& rs, const LabeledDataset& ld) {
  if (ld.n == 0) throw std::invalid_argument("g2 needs at least one record");
  std::size_t total = 0;
  for (const auto& rule : rs.rules) total += match_count(rule, ld);
  return static_cast<double>(total) / (static_cast<double>(rs.rules.size()) * static_cast<double>(ld.n));
}

double g3(const RuleSet& rs) {
  const auto counts = rs.class_counts();
  const double r = static_cast<double>(rs.rules.size());
  const double c = static_cast<double>(counts.size());
  const double mean = r / c;
  double v = 0.0;
  for (const auto k : counts) v += (static_cast<double>(k) - mean) * (static_cast<double>(k) - mean);
  v /= c;
  return std::clamp(1.0 - v / r, 0.0, 1.0);
}

FitnessBreakdown fitness(const RuleSet& rs, const LabeledDataset& ld, const FitnessWeights& w) {
  FitnessBreakdown f;
  f.g1 = g1(rs);
  f.g2 = g2(rs, ld);
  f.g3 = g3(rs);
  f.G = w.alpha() * f.g1 + w.beta() * f.g2 + w.gamma() * f.g3;
  return f;
}

}  // namespace fuzzybso
