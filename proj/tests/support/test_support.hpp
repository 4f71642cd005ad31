#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fuzzybso/dataset.hpp"
#include "fuzzybso/fitness.hpp"
#include "fuzzybso/membership.hpp"
#include "fuzzybso/rule_model.hpp"

namespace testsupport {

inline std::filesystem::path pid_path() {
  return std::filesystem::path(FUZZYBSO_DATA_DIR) / "pima-indians-diabetes.csv";
}

inline std::string cli_path() { return FUZZYBSO_CLI_PATH; }

/// Dataset from rows and 1-based labels; class values are "1".."c".
inline fuzzybso::Dataset make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                                      int classes = 0) {
  int c = classes;
  for (const int l : labels) c = std::max(c, l);
  std::vector<std::string> names;
  for (std::size_t j = 0; j < rows.front().size(); ++j) names.push_back("x" + std::to_string(j + 1));
  std::vector<std::string> class_values;
  for (int k = 1; k <= c; ++k) class_values.push_back(std::to_string(k));
  std::vector<double> values;
  for (const auto& row : rows) values.insert(values.end(), row.begin(), row.end());
  return fuzzybso::Dataset(names, class_values, values, labels);
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("fuzzybso_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// ---------------------------------------------------------------------------
// Brute-force fitness oracle. Works on plain integer tables and recomputes
// every term from its definition without touching the library's fitness code.

struct OracleRule {
  std::vector<int> antecedents;  // 0 = don't care
  int consequent = 1;
  bool conjunctive = true;
};

struct OracleInstance {
  std::size_t m = 0;
  int p = 2;
  int c = 2;
  std::vector<std::vector<int>> records;  // fuzzy labels per record
  std::vector<OracleRule> rules;
};

inline long oracle_matches(const OracleRule& rule, const std::vector<std::vector<int>>& records) {
  long count = 0;
  for (const auto& rec : records) {
    int constrained = 0;
    int hits = 0;
    for (std::size_t j = 0; j < rule.antecedents.size(); ++j) {
      if (rule.antecedents[j] == 0) continue;
      ++constrained;
      if (rec[j] == rule.antecedents[j]) ++hits;
    }
    const bool ok = rule.conjunctive ? hits == constrained : hits > 0;
    if (ok) ++count;
  }
  return count;
}

struct OracleTerms {
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
  double G = 0.0;
  std::vector<long> matches;
};

inline OracleTerms oracle_fitness(const OracleInstance& inst, double alpha, double beta, double gamma) {
  OracleTerms t;
  const double r = static_cast<double>(inst.rules.size());
  long lengths = 0;
  long total_matches = 0;
  std::vector<long> per_class(static_cast<std::size_t>(inst.c), 0);
  for (const auto& rule : inst.rules) {
    for (const int a : rule.antecedents) lengths += a != 0 ? 1 : 0;
    const long mc = oracle_matches(rule, inst.records);
    t.matches.push_back(mc);
    total_matches += mc;
    ++per_class[static_cast<std::size_t>(rule.consequent - 1)];
  }
  t.g1 = 1.0 - static_cast<double>(lengths) / (r * static_cast<double>(inst.m));
  t.g2 = static_cast<double>(total_matches) / (r * static_cast<double>(inst.records.size()));
  // Population variance as E[x^2] - E[x]^2 over exact integer sums.
  long sum = 0;
  long sum_sq = 0;
  for (const long k : per_class) {
    sum += k;
    sum_sq += k * k;
  }
  const double cc = static_cast<double>(inst.c);
  const double variance = static_cast<double>(sum_sq) / cc - (static_cast<double>(sum) / cc) * (static_cast<double>(sum) / cc);
  t.g3 = std::min(1.0, std::max(0.0, 1.0 - variance / r));
  const double total = alpha + beta + gamma;
  t.G = (alpha * t.g1 + beta * t.g2 + gamma * t.g3) / total;
  return t;
}

/// Random instance with n <= 20, m <= 4, p = 2, r <= 3.
inline OracleInstance random_instance(std::mt19937_64& gen) {
  auto pick = [&gen](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };
  OracleInstance inst;
  inst.m = static_cast<std::size_t>(pick(1, 4));
  inst.p = 2;
  inst.c = pick(2, 3);
  const int n = pick(1, 20);
  const int r = pick(1, 3);
  for (int i = 0; i < n; ++i) {
    std::vector<int> rec(inst.m);
    for (auto& v : rec) v = pick(1, inst.p);
    inst.records.push_back(rec);
  }
  for (int i = 0; i < r; ++i) {
    OracleRule rule;
    rule.antecedents.resize(inst.m);
    for (auto& a : rule.antecedents) a = pick(0, inst.p);
    rule.consequent = pick(1, inst.c);
    rule.conjunctive = pick(0, 1) == 0;
    inst.rules.push_back(rule);
  }
  return inst;
}

inline fuzzybso::LabeledDataset to_labeled(const OracleInstance& inst) {
  fuzzybso::LabeledDataset ld;
  ld.n = inst.records.size();
  ld.m = inst.m;
  ld.p = inst.p;
  ld.c = inst.c;
  for (const auto& rec : inst.records) {
    for (const int v : rec) ld.labels.push_back(static_cast<std::uint8_t>(v));
    ld.classes.push_back(1);
  }
  return ld;
}

inline fuzzybso::RuleSet to_rule_set(const OracleInstance& inst) {
  fuzzybso::RuleSet rs;
  rs.m = static_cast<int>(inst.m);
  rs.p = inst.p;
  rs.c = inst.c;
  for (const auto& r : inst.rules) {
    fuzzybso::Rule rule;
    rule.antecedents = r.antecedents;
    rule.consequent = r.consequent;
    rule.connective = r.conjunctive ? fuzzybso::Connective::And : fuzzybso::Connective::Or;
    rs.rules.push_back(rule);
  }
  return rs;
}

}  // namespace testsupport
