#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fuzzybso/config.hpp"
#include "fuzzybso/dataset.hpp"
#include "fuzzybso/inference.hpp"
#include "fuzzybso/optimizer.hpp"

namespace fuzzybso {

/// Dataset named by the config's data path and label column.
Dataset load_dataset(const RunConfig& config);

/// Class id of `label`, or the last class when the label is not present.
int resolve_positive_class(const std::vector<std::string>& class_values, const std::string& label);

/// Runs the configured optimizer (and seed) on a prepared problem.
RunResult optimize(const TrainingProblem& problem, const RunConfig& config);

/// One complete train + evaluate pass: stratified split at
/// config.train_fraction with config.seed, optimizer seeded with config.seed.
struct TrainOutcome {
  Model model;
  RunResult run;
  Split split;
  EvaluationReport train_report;
  EvaluationReport test_report;
};

TrainOutcome train_once(const Dataset& data, const RunConfig& config);

/// Metrics of one evaluated slice; sensitivity and specificity are empty when
/// undefined or when the task has more than two classes.
struct SliceMetrics {
  std::size_t records = 0;
  double accuracy = 0.0;
  std::optional<ConfusionCounts> confusion;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
};

SliceMetrics slice_metrics(const EvaluationReport& report);

/// One (ratio, seed, optimizer) cell of a sweep, or one (e, K) grid point.
struct CellResult {
  double ratio = 0.0;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::BsoEwma;
  double e = 0.0;
  double slope = 0.0;
  bool ok = false;
  std::string error;
  double train_accuracy = 0.0;
  SliceMetrics test;
  double objective = 0.0;
  FitnessBreakdown fitness;
  std::size_t iterations = 0;
  bool monotone = true;
};

struct CellSummary {
  double ratio = 0.0;
  OptimizerKind optimizer = OptimizerKind::BsoEwma;
  std::size_t runs = 0;
  std::size_t failed = 0;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;
  std::optional<double> sensitivity_mean;
  double sensitivity_std = 0.0;
  std::optional<double> specificity_mean;
  double specificity_std = 0.0;
};

/// Mean and sample standard deviation (0 for fewer than two values).
std::pair<double, double> mean_std(const std::vector<double>& values);

/// Every (ratio, seed, optimizer) cell, in that nesting order. Cells run on up
/// to config.workers threads; a failing cell is recorded, not raised.
std::vector<CellResult> run_sweep(const Dataset& data, const RunConfig& config);
/// One row per (ratio, optimizer) in first-seen order.
std::vector<CellSummary> summarize(const std::vector<CellResult>& cells);

/// Grid over config.e_values x config.k_values with everything else fixed.
std::vector<CellResult> run_param_sweep(const Dataset& data, const RunConfig& config);

struct BenchmarkRow {
  double fraction = 0.0;
  OptimizerKind optimizer = OptimizerKind::BsoEwma;
  std::size_t train_records = 0;
  double threshold = 0.0;
  bool reached = false;
  int iterations_to_threshold = 0;
  std::size_t evaluations_to_threshold = 0;
  double ms_to_threshold = 0.0;
  int iterations = 0;
  double final_best = 0.0;
  double total_ms = 0.0;
  bool ok = true;
  std::string error;
};

/// For each training-data fraction and each of bso-ewma, bso-plain and ga:
/// iterations, evaluations and wall-clock time until the trace's best value
/// first reaches the threshold.
std::vector<BenchmarkRow> run_benchmark(const Dataset& data, const RunConfig& config);

/// First trace record whose best value reaches `threshold`.
std::optional<TraceRecord> first_reaching(const ConvergenceTrace& trace, double threshold);

void write_rules_csv(const Model& model, std::ostream& out);
void write_predictions_csv(const Dataset& d, std::span<const std::size_t> source_rows,
                           const EvaluationReport& report, const std::vector<std::string>& class_values,
                           std::ostream& out);
void write_sweep_runs_csv(const std::vector<CellResult>& cells, std::ostream& out);
void write_sweep_summary_csv(const std::vector<CellSummary>& rows, std::ostream& out);
void write_param_sweep_csv(const std::vector<CellResult>& cells, std::ostream& out);
void write_benchmark_csv(const std::vector<BenchmarkRow>& rows, std::ostream& out);

/// Command entry points. Artifacts go to config.output (created when
/// missing); the human-readable report goes to `log`.
void cmd_train(const RunConfig& config, std::ostream& log);
void cmd_evaluate(const RunConfig& config, const std::filesystem::path& model_path, std::ostream& log);
void cmd_sweep(const RunConfig& config, std::ostream& log);
void cmd_param_sweep(const RunConfig& config, std::ostream& log);
void cmd_benchmark(const RunConfig& config, std::ostream& log);

}  // namespace fuzzybso
