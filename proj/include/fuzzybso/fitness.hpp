#pragma once

#include <cstddef>

#include "fuzzybso/membership.hpp"
#include "fuzzybso/rule_model.hpp"

namespace fuzzybso {

/// Non-negative weights of the three objective terms, normalized to sum to 1.
class FitnessWeights {
 public:
  FitnessWeights() = default;
  /// Throws std::invalid_argument on negative or all-zero weights.
  FitnessWeights(double alpha, double beta, double gamma);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }

 private:
  double alpha_ = 1.0 / 3.0;
  double beta_ = 1.0 / 3.0;
  double gamma_ = 1.0 / 3.0;
};

struct FitnessBreakdown {
  double g1 = 0.0;  // rule brevity
  double g2 = 0.0;  // data coverage
  double g3 = 0.0;  // class balance of the rule base
  double G = 0.0;
};

/// Records whose fuzzy labels satisfy the rule's antecedents: all of them for
/// AND, at least one for OR. The consequent is not consulted.
std::size_t match_count(const Rule& rule, const LabeledDataset& ld);

/// 1 - sum(length_i) / (r m).
double g1(const RuleSet& rs);

/// sum_i match_count(rule_i) / (r n).
double g2(const RuleSet& rs, const LabeledDataset& ld);

/// 1 - V / r, V the population variance of the per-class rule counts,
/// clamped to [0, 1].
double g3(const RuleSet& rs);

FitnessBreakdown fitness(const RuleSet& rs, const LabeledDataset& ld, const FitnessWeights& w);

}  // namespace fuzzybso
