#include <doctest.h>

#include <random>

#include "fuzzybso/training.hpp"
#include "test_support.hpp"

using namespace fuzzybso;

TEST_CASE("fast training accuracy agrees with model evaluation") {
  const Dataset d = load_csv(testsupport::pid_path());
  const Split s = split(d, {0.8, 3});
  std::mt19937_64 gen(4);
  for (const auto decision : {Decision::WinnerTakesAll, Decision::ClassSum}) {
    ObjectiveSettings settings;
    settings.decision = decision;
    const TrainingProblem problem(s.train, 3, 10, settings);
    const auto spec = problem.genotype_spec();
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> genes(spec.size());
      for (std::size_t i = 0; i < genes.size(); ++i) {
        genes[i] = std::uniform_real_distribution<double>(spec.bounds[i].lo, spec.bounds[i].hi)(gen);
      }
      const RuleSet rs = problem.rules(genes);
      Model model = problem.build_model(genes, s.train);
      model.rules = rs;  // unrounded weights, as the objective sees them
      CHECK(problem.train_accuracy(rs) == doctest::Approx(evaluate(model, s.train).accuracy).epsilon(1e-15));
    }
  }
}

TEST_CASE("objective blends accuracy and rule-base fitness") {
  const Dataset d = testsupport::make_dataset({{0, 1}, {1, 2}, {2, 3}, {3, 3}, {0, 0}, {3, 1}}, {1, 1, 2, 2, 1, 2});
  const std::vector<double> genes{1, 0, 1, 0, 3, 0, 2, 1};
  for (const double lambda : {0.0, 0.5, 0.98, 1.0}) {
    ObjectiveSettings settings;
    settings.accuracy_weight = lambda;
    const TrainingProblem problem(d, 3, 2, settings);
    const auto ev = problem.evaluate(genes);
    const auto rs = problem.rules(genes);
    const auto f = fitness(rs, problem.labeled(), settings.weights);
    CHECK(ev.breakdown.G == f.G);
    CHECK(ev.value == doctest::Approx(lambda * problem.train_accuracy(rs) + (1 - lambda) * f.G));
  }
}

TEST_CASE("partitions come from the training records only") {
  const Dataset d = testsupport::make_dataset({{0}, {10}, {2}, {8}, {100}, {-50}}, {1, 2, 1, 2, 1, 2});
  const std::vector<std::size_t> idx{0, 1, 2, 3};
  const Dataset train = d.select(idx);
  const TrainingProblem problem(train, 3, 2, ObjectiveSettings{});
  CHECK(problem.partitions()[0].min() == 0.0);
  CHECK(problem.partitions()[0].max() == 10.0);
}

TEST_CASE("models store weights at four decimals") {
  const Dataset d = testsupport::make_dataset({{0, 1}, {1, 2}, {2, 3}}, {1, 2, 1});
  const TrainingProblem problem(d, 3, 2, ObjectiveSettings{});
  const std::vector<double> genes{1, 2, 1, 0, 2, 0, 2, 1};
  const Model model = problem.build_model(genes, d);
  for (const auto& r : model.rules.rules) CHECK(r.weight == round_weight(r.weight));
  CHECK(round_weight(1.0 / 3.0) == 0.3333);
  CHECK(round_weight(0.87654321) == 0.8765);
  CHECK(model.majority_class == 1);
  CHECK(model.class_values == d.class_values());
}
