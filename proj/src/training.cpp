#include "fuzzybso/training.hpp"

#include <algorithm>
#include <cmath>

namespace fuzzybso {

double round_weight(double w) { return std::round(w * 1e4) / 1e4; }

TrainingProblem::TrainingProblem(const Dataset& train, int p, int r, ObjectiveSettings settings)
    : settings_(settings), majority_class_(train.majority_class()) {
  ctx_ = RuleContext{static_cast<int>(train.attribute_count()), p, train.class_count(), r};
  const auto stats = attribute_stats(train);
  partitions_ = build_partitions(stats, p);
  labeled_ = fuzzify_dataset(partitions_, train);

  const std::size_t n = train.size();
  const std::size_t m = train.attribute_count();
  const auto pp = static_cast<std::size_t>(p);
  degrees_.resize(n * m * pp);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < pp; ++k) {
        degrees_[(i * m + j) * pp + k] = partitions_[j].degree(static_cast<int>(k) + 1, train.value(i, j));
      }
    }
  }
}

RuleSet TrainingProblem::rules(std::span<const double> genes) const {
  RuleSet rs = decode(genes, ctx_);
  assign_weights(rs, labeled_);
  return rs;
}

double TrainingProblem::train_accuracy(const RuleSet& rs) const {
  const std::size_t m = labeled_.m;
  const auto pp = static_cast<std::size_t>(ctx_.p);
  std::vector<double> totals(static_cast<std::size_t>(ctx_.c));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labeled_.n; ++i) {
    const double* row = degrees_.data() + i * m * pp;
    int predicted = majority_class_;
    double best = 0.0;
    std::fill(totals.begin(), totals.end(), 0.0);
    for (const auto& rule : rs.rules) {
      const bool conjunctive = rule.connective == Connective::And;
      double act = conjunctive ? 1.0 : 0.0;
      bool any = false;
      for (std::size_t j = 0; j < m; ++j) {
        const int k = rule.antecedents[j];
        if (k == 0) continue;
        const double d = row[j * pp + static_cast<std::size_t>(k - 1)];
        act = conjunctive ? std::min(act, d) : std::max(act, d);
        any = true;
      }
      const double score = rule.weight * (any ? act : 1.0);
      if (settings_.decision == Decision::WinnerTakesAll) {
        if (score > best) {
          best = score;
          predicted = rule.consequent;
        }
      } else {
        totals[static_cast<std::size_t>(rule.consequent - 1)] += score;
      }
    }
    if (settings_.decision == Decision::ClassSum) {
      for (std::size_t c = 0; c < totals.size(); ++c) {
        if (totals[c] > best) {
          best = totals[c];
          predicted = static_cast<int>(c) + 1;
        }
      }
    }
    if (predicted == labeled_.classes[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labeled_.n);
}

Evaluation TrainingProblem::evaluate(std::span<const double> genes) const {
  const RuleSet rs = rules(genes);
  Evaluation ev;
  ev.breakdown = fitness(rs, labeled_, settings_.weights);
  const double lambda = settings_.accuracy_weight;
  ev.value = lambda > 0.0 ? lambda * train_accuracy(rs) + (1.0 - lambda) * ev.breakdown.G : ev.breakdown.G;
  return ev;
}

FitnessFunction TrainingProblem::objective() const {
  return [this](std::span<const double> genes) { return evaluate(genes); };
}

Model TrainingProblem::build_model(std::span<const double> genes, const Dataset& train) const {
  Model model;
  model.attribute_names = train.attribute_names();
  model.partitions = partitions_;
  model.rules = rules(genes);
  for (auto& rule : model.rules.rules) rule.weight = round_weight(rule.weight);
  model.class_values = train.class_values();
  model.majority_class = majority_class_;
  model.decision = settings_.decision;
  return model;
}

}  // namespace fuzzybso
