// Command-line front end: train, evaluate, sweep, param-sweep, benchmark.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 runtime failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fuzzybso/config.hpp"
#include "fuzzybso/errors.hpp"
#include "fuzzybso/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct Flags {
  std::string config;
  std::string data;
  std::string label;
  std::string out;
  std::string optimizer;
  std::string model;
  std::string test;
  std::uint64_t seed = 0;
  double fraction = 0.0;
  double threshold = 0.0;
  int iterations = 0;
  std::size_t workers = 0;
  std::vector<double> ratios;
  std::vector<std::uint64_t> seeds;
  std::vector<double> e_values;
  std::vector<double> k_values;
  std::vector<double> fractions;
  std::vector<std::string> optimizers;
};

struct Registered {
  CLI::Option* seed = nullptr;
  CLI::Option* fraction = nullptr;
  CLI::Option* threshold = nullptr;
  CLI::Option* iterations = nullptr;
  CLI::Option* workers = nullptr;
};

void add_common(CLI::App* cmd, Flags& f, Registered& reg) {
  cmd->add_option("--config", f.config, "JSON run configuration; flags override its values");
  cmd->add_option("--data", f.data, "CSV dataset");
  cmd->add_option("--label", f.label, "label column: header name or 0-based index (default: last column)");
  cmd->add_option("--out", f.out, "output directory");
  reg.seed = cmd->add_option("--seed", f.seed, "split and optimizer seed");
  reg.fraction = cmd->add_option("--fraction", f.fraction, "training fraction of the stratified split");
  reg.iterations = cmd->add_option("--iterations", f.iterations, "BSO iterations and GA generations");
  reg.workers = cmd->add_option("--workers", f.workers, "concurrent runs");
}

fuzzybso::RunConfig build_config(const Flags& f, const Registered& reg) {
  using namespace fuzzybso;
  RunConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  if (!f.data.empty()) c.data = f.data;
  if (!f.label.empty()) c.label = f.label;
  if (!f.out.empty()) c.output = f.out;
  if (!f.test.empty()) c.test_data = f.test;
  if (!f.optimizer.empty()) c.optimizer = parse_optimizer(f.optimizer);
  if (reg.seed && reg.seed->count()) c.seed = f.seed;
  if (reg.fraction && reg.fraction->count()) c.train_fraction = f.fraction;
  if (reg.threshold && reg.threshold->count()) c.threshold = f.threshold;
  if (reg.workers && reg.workers->count()) c.workers = f.workers;
  if (reg.iterations && reg.iterations->count()) {
    c.bso.max_iterations = f.iterations;
    c.ga.generations = f.iterations;
  }
  if (!f.ratios.empty()) c.ratios = f.ratios;
  if (!f.seeds.empty()) c.seeds = f.seeds;
  if (!f.e_values.empty()) c.e_values = f.e_values;
  if (!f.k_values.empty()) c.k_values = f.k_values;
  if (!f.fractions.empty()) c.fractions = f.fractions;
  if (!f.optimizers.empty()) {
    c.sweep_optimizers.clear();
    for (const auto& name : f.optimizers) c.sweep_optimizers.push_back(parse_optimizer(name));
  }
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy rule-based classifier trained with brain storm optimization"};
  app.require_subcommand(1);

  Flags f;
  // One set of option handles per subcommand; `count()` tells which flags were given.
  Registered reg_train, reg_evaluate, reg_sweep, reg_param, reg_bench;

  auto* train = app.add_subcommand("train", "train a rule base and write model, trace and rule table");
  add_common(train, f, reg_train);
  train->add_option("--optimizer", f.optimizer, "bso-ewma | bso-plain | ga");

  auto* evaluate = app.add_subcommand("evaluate", "evaluate a saved model on a split or a test file");
  add_common(evaluate, f, reg_evaluate);
  evaluate->add_option("--model", f.model, "model file written by train")->required();
  evaluate->add_option("--test", f.test, "explicit test CSV (skips the split)");

  auto* sweep = app.add_subcommand("sweep", "train and evaluate over ratios x seeds x optimizers");
  add_common(sweep, f, reg_sweep);
  sweep->add_option("--ratios", f.ratios, "training ratios")->delimiter(',');
  sweep->add_option("--seeds", f.seeds, "seeds")->delimiter(',');
  sweep->add_option("--optimizer", f.optimizers, "optimizers to compare")->delimiter(',');

  auto* param = app.add_subcommand("param-sweep", "grid over the EWMA factor e and the step slope K");
  add_common(param, f, reg_param);
  param->add_option("--optimizer", f.optimizer, "bso-ewma | bso-plain | ga");
  param->add_option("--e-values", f.e_values, "EWMA factors in (0, 1]")->delimiter(',');
  param->add_option("--k-values", f.k_values, "step slopes K > 0")->delimiter(',');

  auto* bench = app.add_subcommand("benchmark", "iterations and time to reach an objective threshold");
  add_common(bench, f, reg_bench);
  bench->add_option("--fractions", f.fractions, "training-data fractions in (0, 1]")->delimiter(',');
  reg_bench.threshold = bench->add_option("--threshold", f.threshold, "objective threshold in (0, 1]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const Registered& reg = train->parsed()      ? reg_train
                            : evaluate->parsed() ? reg_evaluate
                            : sweep->parsed()    ? reg_sweep
                            : param->parsed()    ? reg_param
                                                 : reg_bench;
    const auto config = build_config(f, reg);
    if (train->parsed()) {
      fuzzybso::cmd_train(config, std::cout);
    } else if (evaluate->parsed()) {
      fuzzybso::cmd_evaluate(config, f.model, std::cout);
    } else if (sweep->parsed()) {
      fuzzybso::cmd_sweep(config, std::cout);
    } else if (param->parsed()) {
      fuzzybso::cmd_param_sweep(config, std::cout);
    } else if (bench->parsed()) {
      fuzzybso::cmd_benchmark(config, std::cout);
    }
  } catch (const fuzzybso::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fuzzybso::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
