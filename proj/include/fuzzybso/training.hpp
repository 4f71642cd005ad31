#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fuzzybso/dataset.hpp"
#include "fuzzybso/fitness.hpp"
#include "fuzzybso/inference.hpp"
#include "fuzzybso/membership.hpp"
#include "fuzzybso/optimizer.hpp"
#include "fuzzybso/rule_model.hpp"

namespace fuzzybso {

/// What the optimizers maximize when learning a rule base:
///   accuracy_weight * train_accuracy + (1 - accuracy_weight) * G
/// With accuracy_weight = 0 this is the rule-base fitness G alone.
struct ObjectiveSettings {
  double accuracy_weight = 0.98;
  FitnessWeights weights;
  Decision decision = Decision::WinnerTakesAll;
};

/// Training split prepared once for repeated objective evaluations:
/// partitions from the split's ranges, its fuzzy labels, and a table of every
/// membership degree so classification is a lookup.
class TrainingProblem {
 public:
  TrainingProblem(const Dataset& train, int p, int r, ObjectiveSettings settings);

  const RuleContext& context() const { return ctx_; }
  const std::vector<FuzzyPartition>& partitions() const { return partitions_; }
  const LabeledDataset& labeled() const { return labeled_; }
  GenotypeSpec genotype_spec() const { return rule_genotype_spec(ctx_); }

  /// Decoded and weighted rule base of a genotype.
  RuleSet rules(std::span<const double> genes) const;

  /// Accuracy of a weighted rule base on the training records.
  double train_accuracy(const RuleSet& rs) const;

  Evaluation evaluate(std::span<const double> genes) const;
  FitnessFunction objective() const;

  /// Model for a genotype; weights are rounded to the 4 decimals the model
  /// file stores so saved and in-memory models predict identically.
  Model build_model(std::span<const double> genes, const Dataset& train) const;

 private:
  RuleContext ctx_;
  ObjectiveSettings settings_;
  std::vector<FuzzyPartition> partitions_;
  LabeledDataset labeled_;
  std::vector<double> degrees_;  // n x m x p
  int majority_class_ = 1;
};

/// Rounds half away from zero to 4 decimals.
double round_weight(double w);

}  // namespace fuzzybso
