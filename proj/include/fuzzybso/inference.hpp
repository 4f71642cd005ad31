#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fuzzybso/dataset.hpp"
#include "fuzzybso/fitness.hpp"
#include "fuzzybso/membership.hpp"
#include "fuzzybso/rule_model.hpp"

namespace fuzzybso {

/// How rule scores become a class decision.
enum class Decision {
  WinnerTakesAll,  // class of the single best-scoring rule
  ClassSum,        // class with the largest summed score
};

struct TrainingInfo {
  std::string optimizer;
  std::uint64_t seed = 0;
  std::string params_digest;
  std::size_t train_records = 0;
  FitnessBreakdown fitness;
};

struct Model {
  std::vector<std::string> attribute_names;
  std::vector<FuzzyPartition> partitions;
  RuleSet rules;  // weighted
  std::vector<std::string> class_values;  // original label of class j+1
  int majority_class = 1;
  int positive_class = 1;  // for sensitivity / specificity
  Decision decision = Decision::WinnerTakesAll;
  TrainingInfo training;

  std::size_t attribute_count() const { return partitions.size(); }
};

/// AND: min of the referenced membership degrees; OR: max. A rule with no
/// antecedents activates fully.
double activation(const Rule& rule, std::span<const FuzzyPartition> partitions, std::span<const double> x);

struct Prediction {
  int label = 1;
  double score = 0.0;
};

/// Scores each rule as weight * activation. Ties go to the lower rule (or
/// class) index; an all-zero score vector falls back to the majority class.
Prediction classify(const Model& model, std::span<const double> x);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

/// TP / (TP + FN); nullopt when the denominator is zero.
std::optional<double> sensitivity(const ConfusionCounts& c);
/// TN / (TN + FP); nullopt when the denominator is zero.
std::optional<double> specificity(const ConfusionCounts& c);
/// (TP + TN) / total; nullopt for an empty tally.
std::optional<double> accuracy(const ConfusionCounts& c);

struct EvaluationReport {
  std::vector<Prediction> predictions;
  std::size_t correct = 0;
  double accuracy = 0.0;                    // any class count
  std::optional<ConfusionCounts> confusion;  // binary tasks only
};

/// Classifies every record of `d`, whose labels must use the model's class
/// mapping. Confusion counts are filled when the model has two classes.
EvaluationReport evaluate(const Model& model, const Dataset& d);

/// Confusion counts of a binary task; throws std::invalid_argument when the
/// model has more than two classes.
ConfusionCounts confusion(const Model& model, const Dataset& d);

}  // namespace fuzzybso
