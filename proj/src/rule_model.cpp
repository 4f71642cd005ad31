#include "fuzzybso/rule_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "fuzzybso/fitness.hpp"

namespace fuzzybso {

namespace {

int round_clamp(double x, int lo, int hi) {
  const double r = std::round(x);
  if (r <= lo) return lo;
  if (r >= hi) return hi;
  return static_cast<int>(r);
}

}  // namespace

std::string_view to_string(Connective c) { return c == Connective::And ? "AND" : "OR"; }

int Rule::length() const {
  return static_cast<int>(std::count_if(antecedents.begin(), antecedents.end(), [](int a) { return a != 0; }));
}

std::vector<std::size_t> RuleSet::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(c), 0);
  for (const auto& rule : rules) {
    if (rule.consequent >= 1 && rule.consequent <= c) ++counts[static_cast<std::size_t>(rule.consequent - 1)];
  }
  return counts;
}

RuleSet decode(std::span<const double> genes, const RuleContext& ctx) {
  if (genes.size() != ctx.genotype_length()) {
    throw std::invalid_argument(
        fmt::format("genotype has {} genes, expected {}", genes.size(), ctx.genotype_length()));
  }
  RuleSet rs;
  rs.m = ctx.m;
  rs.p = ctx.p;
  rs.c = ctx.c;
  rs.rules.resize(static_cast<std::size_t>(ctx.r));
  const std::size_t stride = ctx.genes_per_rule();
  const auto m = static_cast<std::size_t>(ctx.m);
  for (std::size_t i = 0; i < rs.rules.size(); ++i) {
    const auto g = genes.subspan(i * stride, stride);
    auto& rule = rs.rules[i];
    rule.antecedents.resize(m);
    for (std::size_t j = 0; j < m; ++j) rule.antecedents[j] = round_clamp(g[j], 0, ctx.p);
    rule.consequent = round_clamp(g[m], 1, ctx.c);
    rule.connective = g[m + 1] < 0.5 ? Connective::And : Connective::Or;
  }
  repair(rs);
  return rs;
}

void repair(RuleSet& rs) {
  const auto m = static_cast<std::size_t>(rs.m);
  for (std::size_t i = 0; i < rs.rules.size(); ++i) {
    auto& rule = rs.rules[i];
    if (m > 0 && rule.length() == 0) rule.antecedents[i % m] = 1;
  }

  auto counts = rs.class_counts();
  for (std::size_t missing = 0; missing < counts.size(); ++missing) {
    if (counts[missing] != 0) continue;
    const auto donor = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    if (counts[donor] < 2) break;
    const int donor_class = static_cast<int>(donor) + 1;
    const auto it = std::find_if(rs.rules.begin(), rs.rules.end(),
                                 [donor_class](const Rule& r) { return r.consequent == donor_class; });
    it->consequent = static_cast<int>(missing) + 1;
    --counts[donor];
    ++counts[missing];
  }
}

std::vector<double> encode(const RuleSet& rs) {
  std::vector<double> genes;
  genes.reserve(rs.rules.size() * (static_cast<std::size_t>(rs.m) + 2));
  for (const auto& rule : rs.rules) {
    for (const int a : rule.antecedents) genes.push_back(static_cast<double>(a));
    genes.push_back(static_cast<double>(rule.consequent));
    genes.push_back(rule.connective == Connective::And ? 0.0 : 1.0);
  }
  return genes;
}

GenotypeSpec rule_genotype_spec(const RuleContext& ctx) {
  GenotypeSpec spec;
  spec.bounds.reserve(ctx.genotype_length());
  for (int i = 0; i < ctx.r; ++i) {
    for (int j = 0; j < ctx.m; ++j) spec.bounds.push_back({-0.49, ctx.p + 0.49});
    spec.bounds.push_back({0.51, ctx.c + 0.49});
    spec.bounds.push_back({0.0, 1.0});
  }
  return spec;
}

double rule_weight(const Rule& rule, const LabeledDataset& ld) {
  if (ld.n == 0) throw std::invalid_argument("rule_weight needs a non-empty dataset");
  const double brevity = 1.0 - static_cast<double>(rule.length()) / static_cast<double>(ld.m);
  const double coverage = static_cast<double>(match_count(rule, ld)) / static_cast<double>(ld.n);
  return 0.5 * (brevity + coverage);
}

void assign_weights(RuleSet& rs, const LabeledDataset& ld) {
  for (auto& rule : rs.rules) rule.weight = rule_weight(rule, ld);
}

}  // namespace fuzzybso
