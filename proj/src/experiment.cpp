#include "fuzzybso/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "fuzzybso/bso.hpp"
#include "fuzzybso/errors.hpp"
#include "fuzzybso/ga.hpp"
#include "fuzzybso/model_io.hpp"
#include "fuzzybso/training.hpp"

namespace fuzzybso {

namespace {

std::string metric(const std::optional<double>& v) { return v ? fmt::format("{:.4f}", *v) : "undefined"; }

std::string csv_metric(const std::optional<double>& v) { return v ? fmt::format("{:.6f}", *v) : "undefined"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  return out;
}

/// Runs job(i) for i in [0, count) on up to `workers` threads. Each job writes
/// only its own slot, so the result does not depend on scheduling.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& t : threads) t.join();
}

RunConfig cell_config(const RunConfig& base, OptimizerKind kind, double ratio, std::uint64_t seed) {
  RunConfig c = base;
  c.optimizer = kind;
  c.train_fraction = ratio;
  c.seed = seed;
  return c;
}

CellResult run_cell(const Dataset& data, const RunConfig& config) {
  CellResult cell;
  cell.ratio = config.train_fraction;
  cell.seed = config.seed;
  cell.optimizer = config.optimizer;
  cell.e = config.bso.e;
  cell.slope = config.bso.slope;
  try {
    const TrainOutcome t = train_once(data, config);
    cell.ok = true;
    cell.train_accuracy = t.train_report.accuracy;
    cell.test = slice_metrics(t.test_report);
    cell.objective = t.run.best.value();
    cell.fitness = t.run.best.fitness->breakdown;
    cell.iterations = t.run.trace.records.empty() ? 0 : static_cast<std::size_t>(t.run.trace.records.back().iteration);
    cell.monotone = t.run.trace.monotone();
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
  }
  return cell;
}

void print_slice(std::ostream& log, const std::string& name, const SliceMetrics& s) {
  fmt::print(log, "{}: records={} accuracy={:.4f}", name, s.records, s.accuracy);
  if (s.confusion) {
    const auto& c = *s.confusion;
    fmt::print(log, " sensitivity={} specificity={} (TP={} FP={} TN={} FN={})", metric(s.sensitivity),
               metric(s.specificity), c.tp, c.fp, c.tn, c.fn);
  } else {
    fmt::print(log, " sensitivity=n/a specificity=n/a (more than two classes)");
  }
  fmt::print(log, "\n");
}

nlohmann::ordered_json slice_json(const SliceMetrics& s) {
  nlohmann::ordered_json j;
  j["records"] = s.records;
  j["accuracy"] = s.accuracy;
  const auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (v) return *v;
    return "undefined";
  };
  if (s.confusion) {
    j["sensitivity"] = opt(s.sensitivity);
    j["specificity"] = opt(s.specificity);
    j["confusion"] = {{"tp", s.confusion->tp}, {"fp", s.confusion->fp}, {"tn", s.confusion->tn},
                      {"fn", s.confusion->fn}};
  }
  return j;
}

void write_text(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  auto out = open_output(dir, name);
  out << text;
}

}  // namespace

Dataset load_dataset(const RunConfig& config) {
  if (config.data.empty()) throw ConfigError("data.path: no dataset given (use --data or the config file)");
  if (!std::filesystem::exists(config.data)) {
    throw ConfigError(fmt::format("data.path: '{}' does not exist", config.data.string()));
  }
  return load_csv(config.data, LabelColumn{config.label});
}

int resolve_positive_class(const std::vector<std::string>& class_values, const std::string& label) {
  const int id = find_class(class_values, label);
  return id != 0 ? id : static_cast<int>(class_values.size());
}

RunResult optimize(const TrainingProblem& problem, const RunConfig& config) {
  if (config.optimizer == OptimizerKind::Ga) {
    GaParams g = config.ga;
    g.seed = config.seed;
    return run_ga(g, problem.objective(), problem.genotype_spec());
  }
  BsoParams b = config.bso;
  b.seed = config.seed;
  b.mode = config.optimizer == OptimizerKind::BsoPlain ? BsoMode::Plain : BsoMode::Ewma;
  return run_bso(b, problem.objective(), problem.genotype_spec());
}

TrainOutcome train_once(const Dataset& data, const RunConfig& config) {
  config.validate();
  TrainOutcome out;
  out.split = split(data, SplitSpec{config.train_fraction, config.seed});
  const TrainingProblem problem(out.split.train, config.p, config.r, config.objective);
  out.run = optimize(problem, config);
  out.model = problem.build_model(out.run.best.genotype, out.split.train);
  out.model.positive_class = resolve_positive_class(out.model.class_values, config.positive_label);
  auto& info = out.model.training;
  info.optimizer = std::string(to_string(config.optimizer));
  info.seed = config.seed;
  info.params_digest = params_digest(config);
  info.train_records = out.split.train.size();
  info.fitness = out.run.best.fitness->breakdown;
  out.train_report = evaluate(out.model, out.split.train);
  out.test_report = evaluate(out.model, out.split.test);
  return out;
}

SliceMetrics slice_metrics(const EvaluationReport& report) {
  SliceMetrics s;
  s.records = report.predictions.size();
  s.accuracy = report.accuracy;
  s.confusion = report.confusion;
  if (s.confusion) {
    s.sensitivity = sensitivity(*s.confusion);
    s.specificity = specificity(*s.confusion);
  }
  return s;
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

std::vector<CellResult> run_sweep(const Dataset& data, const RunConfig& config) {
  config.validate();
  std::vector<RunConfig> cells;
  for (const double ratio : config.ratios) {
    for (const auto seed : config.seeds) {
      for (const auto kind : config.sweep_optimizers) cells.push_back(cell_config(config, kind, ratio, seed));
    }
  }
  std::vector<CellResult> results(cells.size());
  parallel_for(cells.size(), config.workers, [&](std::size_t i) { results[i] = run_cell(data, cells[i]); });
  return results;
}

std::vector<CellSummary> summarize(const std::vector<CellResult>& cells) {
  std::vector<CellSummary> rows;
  std::vector<std::vector<const CellResult*>> groups;
  for (const auto& cell : cells) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const CellSummary& r) {
      return r.ratio == cell.ratio && r.optimizer == cell.optimizer;
    });
    if (it == rows.end()) {
      CellSummary row;
      row.ratio = cell.ratio;
      row.optimizer = cell.optimizer;
      rows.push_back(row);
      groups.emplace_back();
      it = rows.end() - 1;
    }
    groups[static_cast<std::size_t>(it - rows.begin())].push_back(&cell);
  }
  for (std::size_t g = 0; g < rows.size(); ++g) {
    auto& row = rows[g];
    std::vector<double> acc;
    std::vector<double> sens;
    std::vector<double> spec;
    for (const auto* cell : groups[g]) {
      ++row.runs;
      if (!cell->ok) {
        ++row.failed;
        continue;
      }
      acc.push_back(cell->test.accuracy);
      if (cell->test.sensitivity) sens.push_back(*cell->test.sensitivity);
      if (cell->test.specificity) spec.push_back(*cell->test.specificity);
    }
    std::tie(row.accuracy_mean, row.accuracy_std) = mean_std(acc);
    if (!sens.empty()) {
      double mean = 0.0;
      std::tie(mean, row.sensitivity_std) = mean_std(sens);
      row.sensitivity_mean = mean;
    }
    if (!spec.empty()) {
      double mean = 0.0;
      std::tie(mean, row.specificity_std) = mean_std(spec);
      row.specificity_mean = mean;
    }
  }
  return rows;
}

std::vector<CellResult> run_param_sweep(const Dataset& data, const RunConfig& config) {
  config.validate();
  std::vector<RunConfig> cells;
  for (const double e : config.e_values) {
    for (const double k : config.k_values) {
      RunConfig c = config;
      c.bso.e = e;
      c.bso.slope = k;
      cells.push_back(std::move(c));
    }
  }
  std::vector<CellResult> results(cells.size());
  parallel_for(cells.size(), config.workers, [&](std::size_t i) { results[i] = run_cell(data, cells[i]); });
  return results;
}

std::optional<TraceRecord> first_reaching(const ConvergenceTrace& trace, double threshold) {
  for (const auto& rec : trace.records) {
    if (rec.best >= threshold) return rec;
  }
  return std::nullopt;
}

std::vector<BenchmarkRow> run_benchmark(const Dataset& data, const RunConfig& config) {
  config.validate();
  const Split base = split(data, SplitSpec{config.train_fraction, config.seed});
  const OptimizerKind kinds[] = {OptimizerKind::BsoEwma, OptimizerKind::BsoPlain, OptimizerKind::Ga};

  std::vector<BenchmarkRow> rows;
  for (const double fraction : config.fractions) {
    for (const auto kind : kinds) {
      BenchmarkRow row;
      row.fraction = fraction;
      row.optimizer = kind;
      row.threshold = config.threshold;
      rows.push_back(row);
    }
  }
  parallel_for(rows.size(), config.workers, [&](std::size_t i) {
    auto& row = rows[i];
    try {
      const Dataset train =
          row.fraction >= 1.0 ? base.train : split(base.train, SplitSpec{row.fraction, config.seed}).train;
      row.train_records = train.size();
      RunConfig c = config;
      c.optimizer = row.optimizer;
      const TrainingProblem problem(train, c.p, c.r, c.objective);
      const RunResult run = optimize(problem, c);
      const auto& last = run.trace.records.back();
      row.iterations = last.iteration;
      row.final_best = last.best;
      row.total_ms = last.elapsed_ms;
      if (const auto hit = first_reaching(run.trace, config.threshold)) {
        row.reached = true;
        row.iterations_to_threshold = hit->iteration;
        row.evaluations_to_threshold = hit->evaluations;
        row.ms_to_threshold = hit->elapsed_ms;
      }
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  });
  return rows;
}

void write_rules_csv(const Model& model, std::ostream& out) {
  out << "rule";
  for (const auto& name : model.attribute_names) out << ',' << csv_field(name);
  out << ",class,weight,and_or\n";
  for (std::size_t i = 0; i < model.rules.rules.size(); ++i) {
    const auto& rule = model.rules.rules[i];
    out << "R" << (i + 1);
    for (const int k : rule.antecedents) out << ',' << k;
    fmt::print(out, ",{},{:.4f},{}\n", rule.consequent, rule.weight, rule.connective == Connective::And ? 1 : 2);
  }
}

void write_predictions_csv(const Dataset& d, std::span<const std::size_t> source_rows,
                           const EvaluationReport& report, const std::vector<std::string>& class_values,
                           std::ostream& out) {
  out << "record,true_label,predicted_label,score\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& pred = report.predictions[i];
    const std::size_t row = source_rows.empty() ? i : source_rows[i];
    fmt::print(out, "{},{},{},{:.6f}\n", row, csv_field(class_values[static_cast<std::size_t>(d.label(i) - 1)]),
               csv_field(class_values[static_cast<std::size_t>(pred.label - 1)]), pred.score);
  }
}

void write_sweep_runs_csv(const std::vector<CellResult>& cells, std::ostream& out) {
  out << "ratio,seed,optimizer,status,train_accuracy,test_accuracy,sensitivity,specificity,objective,G,g1,g2,g3,"
         "iterations,monotone,error\n";
  for (const auto& c : cells) {
    fmt::print(out, "{:.2f},{},{},{}", c.ratio, c.seed, to_string(c.optimizer), c.ok ? "ok" : "failed");
    if (c.ok) {
      fmt::print(out, ",{:.6f},{:.6f},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{},\n", c.train_accuracy,
                 c.test.accuracy, csv_metric(c.test.sensitivity), csv_metric(c.test.specificity), c.objective,
                 c.fitness.G, c.fitness.g1, c.fitness.g2, c.fitness.g3, c.iterations, c.monotone ? "yes" : "no");
    } else {
      fmt::print(out, ",,,,,,,,,,,,{}\n", csv_field(c.error));
    }
  }
}

void write_sweep_summary_csv(const std::vector<CellSummary>& rows, std::ostream& out) {
  out << "ratio,optimizer,runs,failed,accuracy_mean,accuracy_std,sensitivity_mean,sensitivity_std,"
         "specificity_mean,specificity_std\n";
  for (const auto& r : rows) {
    const bool any = r.runs > r.failed;
    fmt::print(out, "{:.2f},{},{},{},{},{},{},{},{},{}\n", r.ratio, csv_field(std::string(display_name(r.optimizer))),
               r.runs, r.failed, any ? fmt::format("{:.6f}", r.accuracy_mean) : "undefined",
               any ? fmt::format("{:.6f}", r.accuracy_std) : "undefined", csv_metric(r.sensitivity_mean),
               r.sensitivity_mean ? fmt::format("{:.6f}", r.sensitivity_std) : "undefined",
               csv_metric(r.specificity_mean),
               r.specificity_mean ? fmt::format("{:.6f}", r.specificity_std) : "undefined");
  }
}

void write_param_sweep_csv(const std::vector<CellResult>& cells, std::ostream& out) {
  out << "e,K,seed,optimizer,status,train_accuracy,test_accuracy,sensitivity,specificity,objective,G,iterations,"
         "monotone,error\n";
  for (const auto& c : cells) {
    fmt::print(out, "{},{},{},{},{}", c.e, c.slope, c.seed, to_string(c.optimizer), c.ok ? "ok" : "failed");
    if (c.ok) {
      fmt::print(out, ",{:.6f},{:.6f},{},{},{:.6f},{:.6f},{},{},\n", c.train_accuracy, c.test.accuracy,
                 csv_metric(c.test.sensitivity), csv_metric(c.test.specificity), c.objective, c.fitness.G,
                 c.iterations, c.monotone ? "yes" : "no");
    } else {
      fmt::print(out, ",,,,,,,,,{}\n", csv_field(c.error));
    }
  }
}

void write_benchmark_csv(const std::vector<BenchmarkRow>& rows, std::ostream& out) {
  out << "fraction,optimizer,train_records,threshold,status,iterations_to_threshold,evaluations_to_threshold,"
         "ms_to_threshold,iterations,final_best,total_ms,error\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{}", r.fraction, csv_field(std::string(display_name(r.optimizer))), r.train_records,
               r.threshold);
    if (!r.ok) {
      fmt::print(out, ",failed,,,,,,,{}\n", csv_field(r.error));
    } else if (r.reached) {
      fmt::print(out, ",reached,{},{},{:.3f},{},{:.6f},{:.3f},\n", r.iterations_to_threshold,
                 r.evaluations_to_threshold, r.ms_to_threshold, r.iterations, r.final_best, r.total_ms);
    } else {
      fmt::print(out, ",DNF,,,,{},{:.6f},{:.3f},\n", r.iterations, r.final_best, r.total_ms);
    }
  }
}

void cmd_train(const RunConfig& config, std::ostream& log) {
  const Dataset data = load_dataset(config);
  const TrainOutcome t = train_once(data, config);

  const auto& dir = config.output;
  std::filesystem::create_directories(dir);
  save_model(t.model, dir / "model.json");
  {
    auto out = open_output(dir, "trace.csv");
    t.run.trace.write_csv(out, true);
  }
  {
    auto out = open_output(dir, "rules.csv");
    write_rules_csv(t.model, out);
  }
  nlohmann::ordered_json metrics;
  metrics["train"] = slice_json(slice_metrics(t.train_report));
  metrics["test"] = slice_json(slice_metrics(t.test_report));
  write_text(dir, "metrics.json", metrics.dump(2) + "\n");

  const auto& f = t.run.best.fitness->breakdown;
  fmt::print(log, "optimizer: {}  seed: {}  train fraction: {:.2f}\n", display_name(config.optimizer), config.seed,
             config.train_fraction);
  fmt::print(log, "iterations: {}  evaluations: {}\n", t.run.trace.records.back().iteration,
             t.run.trace.records.back().evaluations);
  fmt::print(log, "fitness: g1={:.4f} g2={:.4f} g3={:.4f} G={:.4f}  objective={:.4f}\n", f.g1, f.g2, f.g3, f.G,
             t.run.best.value());
  print_slice(log, "train", slice_metrics(t.train_report));
  print_slice(log, "test", slice_metrics(t.test_report));
  fmt::print(log, "wrote {}, {}, {}, {}\n", (dir / "model.json").string(), (dir / "trace.csv").string(),
             (dir / "rules.csv").string(), (dir / "metrics.json").string());
}

void cmd_evaluate(const RunConfig& config, const std::filesystem::path& model_path, std::ostream& log) {
  const Model model = load_model(model_path);
  const bool explicit_test = !config.test_data.empty();
  const auto path = explicit_test ? config.test_data : config.data;
  if (path.empty()) throw ConfigError("data.path: no dataset given (use --data or --test)");
  if (!std::filesystem::exists(path)) throw ConfigError(fmt::format("data.path: '{}' does not exist", path.string()));
  const Dataset data = load_csv(path, LabelColumn{config.label}, model.class_values);
  if (data.attribute_count() != model.attribute_count()) {
    throw DataError(fmt::format("{}: {} attributes, but the model expects {}", path.string(), data.attribute_count(),
                                model.attribute_count()));
  }

  nlohmann::ordered_json metrics;
  std::vector<std::size_t> test_rows;
  Dataset test;
  if (explicit_test) {
    test = data;
  } else {
    Split s = split(data, SplitSpec{config.train_fraction, config.seed});
    const auto train_report = evaluate(model, s.train);
    print_slice(log, "train", slice_metrics(train_report));
    metrics["train"] = slice_json(slice_metrics(train_report));
    test = std::move(s.test);
    test_rows = std::move(s.test_indices);
  }
  const auto report = evaluate(model, test);
  const auto m = slice_metrics(report);
  print_slice(log, "test", m);
  metrics["test"] = slice_json(m);

  write_text(config.output, "evaluation.json", metrics.dump(2) + "\n");
  auto out = open_output(config.output, "predictions.csv");
  write_predictions_csv(test, test_rows, report, model.class_values, out);
  fmt::print(log, "wrote {}, {}\n", (config.output / "evaluation.json").string(),
             (config.output / "predictions.csv").string());
}

void cmd_sweep(const RunConfig& config, std::ostream& log) {
  const Dataset data = load_dataset(config);
  const auto cells = run_sweep(data, config);
  const auto rows = summarize(cells);
  {
    auto out = open_output(config.output, "sweep_runs.csv");
    write_sweep_runs_csv(cells, out);
  }
  {
    auto out = open_output(config.output, "sweep_summary.csv");
    write_sweep_summary_csv(rows, out);
  }
  std::size_t failed = 0;
  std::size_t non_monotone = 0;
  for (const auto& c : cells) {
    if (!c.ok) ++failed;
    if (c.ok && !c.monotone) ++non_monotone;
  }
  fmt::print(log, "{:>5}  {:<28} {:>4} {:>6}  {:>15}\n", "ratio", "optimizer", "runs", "failed", "accuracy");
  for (const auto& r : rows) {
    fmt::print(log, "{:>5.2f}  {:<28} {:>4} {:>6}  {:.4f} +- {:.4f}\n", r.ratio, display_name(r.optimizer), r.runs,
               r.failed, r.accuracy_mean, r.accuracy_std);
  }
  fmt::print(log, "{} cells, {} failed, {} with a non-monotone trace\n", cells.size(), failed, non_monotone);
  fmt::print(log, "wrote {}, {}\n", (config.output / "sweep_runs.csv").string(),
             (config.output / "sweep_summary.csv").string());
  if (non_monotone > 0) throw std::runtime_error("a sweep cell produced a non-monotone best trace");
}

void cmd_param_sweep(const RunConfig& config, std::ostream& log) {
  const Dataset data = load_dataset(config);
  const auto cells = run_param_sweep(data, config);
  auto out = open_output(config.output, "param_sweep.csv");
  write_param_sweep_csv(cells, out);
  std::vector<double> acc;
  for (const auto& c : cells) {
    if (c.ok) {
      fmt::print(log, "e={:<5} K={:<5} test accuracy {:.4f}\n", c.e, c.slope, c.test.accuracy);
      acc.push_back(c.test.accuracy);
    } else {
      fmt::print(log, "e={:<5} K={:<5} failed: {}\n", c.e, c.slope, c.error);
    }
  }
  if (!acc.empty()) {
    const auto [lo, hi] = std::minmax_element(acc.begin(), acc.end());
    fmt::print(log, "test accuracy spread across the grid: {:.4f} (min {:.4f}, max {:.4f})\n", *hi - *lo, *lo, *hi);
  }
  fmt::print(log, "wrote {}\n", (config.output / "param_sweep.csv").string());
}

void cmd_benchmark(const RunConfig& config, std::ostream& log) {
  const Dataset data = load_dataset(config);
  const auto rows = run_benchmark(data, config);
  auto out = open_output(config.output, "benchmark.csv");
  write_benchmark_csv(rows, out);
  for (const auto& r : rows) {
    fmt::print(log, "fraction {:<5} {:<28} ", r.fraction, display_name(r.optimizer));
    if (!r.ok) {
      fmt::print(log, "failed: {}\n", r.error);
    } else if (r.reached) {
      fmt::print(log, "reached {} at iteration {} ({} evaluations, {:.1f} ms)\n", r.threshold,
                 r.iterations_to_threshold, r.evaluations_to_threshold, r.ms_to_threshold);
    } else {
      fmt::print(log, "DNF (best {:.4f} after {} iterations)\n", r.final_best, r.iterations);
    }
  }
  fmt::print(log, "wrote {}\n", (config.output / "benchmark.csv").string());
}

}  // namespace fuzzybso
