#include "fuzzybso/config.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "fuzzybso/errors.hpp"

namespace fuzzybso {

using nlohmann::json;

std::string_view to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::BsoEwma: return "bso-ewma";
    case OptimizerKind::BsoPlain: return "bso-plain";
    case OptimizerKind::Ga: return "ga";
  }
  return "?";
}

std::string_view display_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::BsoEwma: return "BSO-EWMA";
    case OptimizerKind::BsoPlain: return "BSO-plain";
    case OptimizerKind::Ga: return "GA baseline (AGFS stand-in)";
  }
  return "?";
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "bso-ewma") return OptimizerKind::BsoEwma;
  if (name == "bso-plain") return OptimizerKind::BsoPlain;
  if (name == "ga") return OptimizerKind::Ga;
  throw ConfigError(fmt::format("optimizer: unknown value '{}' (expected bso-ewma, bso-plain or ga)", name));
}

namespace {

/// Reads typed fields out of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(fmt::format("{}: expected an object", where()));
  }

  ~ObjectReader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(fmt::format("{}: unknown field", field(key)));
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void read(const std::string& key, double& out) {
    if (const auto* v = find(key)) {
      if (!v->is_number()) throw ConfigError(fmt::format("{}: expected a number", field(key)));
      out = v->get<double>();
    }
  }

  template <typename Int>
    requires std::is_integral_v<Int>
  void read(const std::string& key, Int& out) {
    if (const auto* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(fmt::format("{}: expected an integer", field(key)));
      if constexpr (std::is_unsigned_v<Int>) {
        if (v->is_number_unsigned() || v->get<long long>() >= 0) {
          out = v->get<Int>();
          return;
        }
        throw ConfigError(fmt::format("{}: expected a non-negative integer", field(key)));
      } else {
        out = v->get<Int>();
      }
    }
  }

  void read(const std::string& key, std::string& out) {
    if (const auto* v = find(key)) {
      if (v->is_string()) {
        out = v->get<std::string>();
      } else if (v->is_number_integer()) {
        out = std::to_string(v->get<long long>());
      } else {
        throw ConfigError(fmt::format("{}: expected a string", field(key)));
      }
    }
  }

  void read(const std::string& key, std::filesystem::path& out) {
    std::string s;
    if (find(key)) {
      read(key, s);
      out = s;
    }
  }

  template <typename T>
  void read(const std::string& key, std::vector<T>& out) {
    if (const auto* v = find(key)) {
      if (!v->is_array()) throw ConfigError(fmt::format("{}: expected an array", field(key)));
      std::vector<T> values;
      for (std::size_t i = 0; i < v->size(); ++i) {
        const auto& item = (*v)[i];
        const bool ok = std::is_integral_v<T> ? item.is_number_integer() && (item.is_number_unsigned() || item.get<long long>() >= 0)
                                              : item.is_number();
        if (!ok) throw ConfigError(fmt::format("{}[{}]: expected a {}", field(key), i,
                                               std::is_integral_v<T> ? "non-negative integer" : "number"));
        values.push_back(item.get<T>());
      }
      out = std::move(values);
    }
  }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_bso(const json& obj, BsoParams& b) {
  ObjectReader in(obj, "bso");
  in.read("q", b.q);
  in.read("k", b.k);
  in.read("max_iterations", b.max_iterations);
  in.read("slope", b.slope);
  in.read("e", b.e);
  in.read("theta", b.theta);
  in.read("mu", b.mu);
  in.read("sigma", b.sigma);
  in.read("p_replace", b.p_replace);
  in.read("p_one_cluster", b.p_one_cluster);
  in.read("p_use_center", b.p_use_center);
  in.read("p_use_center_two", b.p_use_center_two);
  in.read("stagnation", b.stagnation);
}

void read_ga(const json& obj, GaParams& g) {
  ObjectReader in(obj, "ga");
  in.read("population", g.population);
  in.read("generations", g.generations);
  in.read("tournament", g.tournament);
  in.read("crossover", g.crossover);
  in.read("mutation", g.mutation);
  in.read("mutation_sigma", g.mutation_sigma);
  in.read("stagnation", g.stagnation);
}

void check(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(fmt::format("{}: {}", field, message));
}

std::string decision_name(Decision d) { return d == Decision::WinnerTakesAll ? "winner" : "class-sum"; }

}  // namespace

RunConfig config_from_json(const json& doc, RunConfig c) {
  ObjectReader root(doc, "");
  if (const auto* data = root.find("data")) {
    ObjectReader in(*data, "data");
    in.read("path", c.data);
    in.read("label", c.label);
    in.read("test_path", c.test_data);
    in.read("positive_label", c.positive_label);
  }
  root.read("p", c.p);
  root.read("r", c.r);
  root.read("seed", c.seed);
  root.read("train_fraction", c.train_fraction);
  root.read("output", c.output);
  root.read("workers", c.workers);
  if (const auto* opt = root.find("optimizer")) {
    if (!opt->is_string()) throw ConfigError("optimizer: expected a string");
    c.optimizer = parse_optimizer(opt->get<std::string>());
  }

  double alpha = c.objective.weights.alpha();
  double beta = c.objective.weights.beta();
  double gamma = c.objective.weights.gamma();
  if (const auto* fit = root.find("fitness")) {
    ObjectReader in(*fit, "fitness");
    in.read("alpha", alpha);
    in.read("beta", beta);
    in.read("gamma", gamma);
    check(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0, "fitness", "alpha, beta and gamma must be >= 0");
    check(alpha + beta + gamma > 0.0, "fitness", "alpha, beta and gamma must not all be zero");
    c.objective.weights = FitnessWeights(alpha, beta, gamma);
  }
  if (const auto* obj = root.find("objective")) {
    ObjectReader in(*obj, "objective");
    in.read("accuracy_weight", c.objective.accuracy_weight);
    std::string decision = decision_name(c.objective.decision);
    in.read("decision", decision);
    if (decision == "winner") {
      c.objective.decision = Decision::WinnerTakesAll;
    } else if (decision == "class-sum") {
      c.objective.decision = Decision::ClassSum;
    } else {
      throw ConfigError(fmt::format("objective.decision: unknown value '{}' (expected winner or class-sum)", decision));
    }
  }
  if (const auto* b = root.find("bso")) read_bso(*b, c.bso);
  if (const auto* g = root.find("ga")) read_ga(*g, c.ga);
  if (const auto* s = root.find("sweep")) {
    ObjectReader in(*s, "sweep");
    in.read("ratios", c.ratios);
    in.read("seeds", c.seeds);
    if (const auto* opts = in.find("optimizers")) {
      if (!opts->is_array()) throw ConfigError("sweep.optimizers: expected an array");
      c.sweep_optimizers.clear();
      for (const auto& o : *opts) {
        if (!o.is_string()) throw ConfigError("sweep.optimizers: expected strings");
        c.sweep_optimizers.push_back(parse_optimizer(o.get<std::string>()));
      }
    }
  }
  if (const auto* s = root.find("param_sweep")) {
    ObjectReader in(*s, "param_sweep");
    in.read("e_values", c.e_values);
    in.read("k_values", c.k_values);
  }
  if (const auto* s = root.find("benchmark")) {
    ObjectReader in(*s, "benchmark");
    in.read("fractions", c.fractions);
    in.read("threshold", c.threshold);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return config_from_json(doc, std::move(base));
}

void RunConfig::validate() const {
  check(p >= 2 && p <= 255, "p", fmt::format("{} must lie in 2..255", p));
  check(r >= 1, "r", fmt::format("{} must be >= 1", r));
  check(train_fraction > 0.0 && train_fraction < 1.0, "train_fraction",
        fmt::format("{} must lie in (0, 1)", train_fraction));
  check(objective.accuracy_weight >= 0.0 && objective.accuracy_weight <= 1.0, "objective.accuracy_weight",
        fmt::format("{} must lie in [0, 1]", objective.accuracy_weight));
  check(workers >= 1, "workers", "must be >= 1");
  try {
    bso.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("bso: {}", e.what()));
  }
  try {
    ga.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("ga: {}", e.what()));
  }
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    check(ratios[i] > 0.0 && ratios[i] < 1.0, fmt::format("sweep.ratios[{}]", i),
          fmt::format("{} must lie in (0, 1)", ratios[i]));
  }
  for (std::size_t i = 0; i < e_values.size(); ++i) {
    check(e_values[i] > 0.0 && e_values[i] <= 1.0, fmt::format("param_sweep.e_values[{}]", i),
          fmt::format("{} must lie in (0, 1]", e_values[i]));
  }
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    check(k_values[i] > 0.0, fmt::format("param_sweep.k_values[{}]", i), fmt::format("{} must be > 0", k_values[i]));
  }
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    check(fractions[i] > 0.0 && fractions[i] <= 1.0, fmt::format("benchmark.fractions[{}]", i),
          fmt::format("{} must lie in (0, 1]", fractions[i]));
  }
  check(threshold > 0.0 && threshold <= 1.0, "benchmark.threshold", fmt::format("{} must lie in (0, 1]", threshold));
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["data"] = {{"label", c.label}, {"positive_label", c.positive_label}};
  j["p"] = c.p;
  j["r"] = c.r;
  j["seed"] = c.seed;
  j["train_fraction"] = c.train_fraction;
  j["optimizer"] = std::string(to_string(c.optimizer));
  j["fitness"] = {{"alpha", c.objective.weights.alpha()},
                  {"beta", c.objective.weights.beta()},
                  {"gamma", c.objective.weights.gamma()}};
  j["objective"] = {{"accuracy_weight", c.objective.accuracy_weight},
                    {"decision", decision_name(c.objective.decision)}};
  const auto& b = c.bso;
  j["bso"] = {{"q", b.q},
              {"k", b.k},
              {"max_iterations", b.max_iterations},
              {"slope", b.slope},
              {"e", b.e},
              {"theta", b.theta},
              {"mu", b.mu},
              {"sigma", b.sigma},
              {"p_replace", b.p_replace},
              {"p_one_cluster", b.p_one_cluster},
              {"p_use_center", b.p_use_center},
              {"p_use_center_two", b.p_use_center_two},
              {"stagnation", b.stagnation}};
  const auto& g = c.ga;
  j["ga"] = {{"population", g.population},     {"generations", g.generations}, {"tournament", g.tournament},
             {"crossover", g.crossover},       {"mutation", g.mutation},       {"mutation_sigma", g.mutation_sigma},
             {"stagnation", g.stagnation}};
  return j;
}

std::string params_digest(const RunConfig& config) {
  const std::string text = config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace fuzzybso
