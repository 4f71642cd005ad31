#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fuzzybso/bso.hpp"
#include "fuzzybso/dataset.hpp"
#include "fuzzybso/ga.hpp"
#include "fuzzybso/training.hpp"

namespace fuzzybso {

enum class OptimizerKind { BsoEwma, BsoPlain, Ga };

std::string_view to_string(OptimizerKind kind);
/// Human-readable name used in reports; the GA is labelled as the AGFS stand-in.
std::string_view display_name(OptimizerKind kind);
/// Parses "bso-ewma" | "bso-plain" | "ga"; throws ConfigError.
OptimizerKind parse_optimizer(std::string_view name);

/// Everything a command needs. Defaults give a PID training run that
/// finishes in seconds.
struct RunConfig {
  std::filesystem::path data;
  std::string label;  // empty: last column
  std::filesystem::path test_data;  // optional explicit evaluation file
  std::string positive_label = "1";

  int p = 3;
  int r = 10;
  ObjectiveSettings objective;
  OptimizerKind optimizer = OptimizerKind::BsoEwma;
  std::uint64_t seed = 1;
  double train_fraction = 0.8;

  BsoParams bso;
  GaParams ga;

  std::filesystem::path output = "out";
  std::size_t workers = 1;

  // sweep
  std::vector<double> ratios{0.70, 0.75, 0.80, 0.85};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<OptimizerKind> sweep_optimizers{OptimizerKind::BsoEwma, OptimizerKind::Ga};

  // param-sweep
  std::vector<double> e_values{0.2, 0.5, 0.8, 1.0};
  std::vector<double> k_values{5.0, 20.0, 50.0};

  // benchmark
  std::vector<double> fractions{0.25, 0.5, 1.0};
  double threshold = 0.74;

  /// Throws ConfigError naming the field path of the first violation.
  void validate() const;
};

/// Overlays a JSON document onto `base`. Unknown keys and type mismatches are
/// ConfigErrors carrying the field path, e.g. "bso.k".
RunConfig config_from_json(const nlohmann::json& doc, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Canonical JSON of every field that influences results (paths to output and
/// the worker count are left out).
nlohmann::ordered_json config_to_json(const RunConfig& config);

/// FNV-1a over the canonical JSON, as 16 hex digits.
std::string params_digest(const RunConfig& config);

}  // namespace fuzzybso
