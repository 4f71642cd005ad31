#include "fuzzybso/inference.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace fuzzybso {

double activation(const Rule& rule, std::span<const FuzzyPartition> partitions, std::span<const double> x) {
  const bool conjunctive = rule.connective == Connective::And;
  bool any = false;
  double value = conjunctive ? 1.0 : 0.0;
  for (std::size_t j = 0; j < rule.antecedents.size(); ++j) {
    const int k = rule.antecedents[j];
    if (k == 0) continue;
    const double d = partitions[j].degree(k, x[j]);
    value = conjunctive ? std::min(value, d) : std::max(value, d);
    any = true;
  }
  return any ? value : 1.0;
}

Prediction classify(const Model& model, std::span<const double> x) {
  if (x.size() != model.attribute_count()) {
    throw std::invalid_argument(
        fmt::format("record has {} attributes, model expects {}", x.size(), model.attribute_count()));
  }
  if (model.decision == Decision::WinnerTakesAll) {
    Prediction best{model.majority_class, 0.0};
    for (const auto& rule : model.rules.rules) {
      const double score = rule.weight * activation(rule, model.partitions, x);
      if (score > best.score) best = {rule.consequent, score};
    }
    return best;
  }
  std::vector<double> totals(static_cast<std::size_t>(model.rules.c), 0.0);
  for (const auto& rule : model.rules.rules) {
    totals[static_cast<std::size_t>(rule.consequent - 1)] += rule.weight * activation(rule, model.partitions, x);
  }
  Prediction best{model.majority_class, 0.0};
  for (std::size_t j = 0; j < totals.size(); ++j) {
    if (totals[j] > best.score) best = {static_cast<int>(j) + 1, totals[j]};
  }
  return best;
}

std::optional<double> sensitivity(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::optional<double> specificity(const ConfusionCounts& c) {
  if (c.tn + c.fp == 0) return std::nullopt;
  return static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
}

std::optional<double> accuracy(const ConfusionCounts& c) {
  if (c.total() == 0) return std::nullopt;
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

EvaluationReport evaluate(const Model& model, const Dataset& d) {
  if (d.attribute_count() != model.attribute_count()) {
    throw std::invalid_argument(fmt::format("dataset has {} attributes, model expects {}", d.attribute_count(),
                                            model.attribute_count()));
  }
  EvaluationReport report;
  report.predictions.reserve(d.size());
  const bool binary = model.class_values.size() == 2;
  ConfusionCounts counts;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Prediction pred = classify(model, d.record(i));
    report.predictions.push_back(pred);
    const bool hit = pred.label == d.label(i);
    if (hit) ++report.correct;
    if (binary) {
      const bool actual_positive = d.label(i) == model.positive_class;
      if (actual_positive) {
        ++(hit ? counts.tp : counts.fn);
      } else {
        ++(hit ? counts.tn : counts.fp);
      }
    }
  }
  report.accuracy = d.size() == 0 ? 0.0 : static_cast<double>(report.correct) / static_cast<double>(d.size());
  if (binary) report.confusion = counts;
  return report;
}

ConfusionCounts confusion(const Model& model, const Dataset& d) {
  if (model.class_values.size() != 2) {
    throw std::invalid_argument(fmt::format("sensitivity/specificity need a binary task, model has {} classes",
                                            model.class_values.size()));
  }
  return *evaluate(model, d).confusion;
}

}  // namespace fuzzybso
