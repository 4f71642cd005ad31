#include "fuzzybso/model_io.hpp"

#include <fstream>

#include <fmt/format.h>

#include "fuzzybso/errors.hpp"
#include "fuzzybso/training.hpp"

namespace fuzzybso {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string decision_name(Decision d) { return d == Decision::WinnerTakesAll ? "winner" : "class-sum"; }

[[noreturn]] void bad(const std::string& field, const std::string& message) {
  throw DataError(fmt::format("model file: {}: {}", field, message));
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) bad(field, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) bad(field, "expected an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) bad(field, "expected a string");
  return v.get<std::string>();
}

const json& array(const json& v, const std::string& field) {
  if (!v.is_array()) bad(field, "expected an array");
  return v;
}

int class_id(const std::vector<std::string>& classes, const std::string& value, const std::string& field) {
  const int id = find_class(classes, value);
  if (id == 0) bad(field, fmt::format("'{}' is not one of the classes", value));
  return id;
}

bool scalar_array(const ordered_json& v) {
  if (!v.is_array()) return false;
  for (const auto& item : v) {
    if (item.is_structured() && !scalar_array(item)) return false;
    if (item.is_array() && !item.empty() && item.front().is_array()) return false;
  }
  return true;
}

/// Two-space indented JSON with arrays of scalars (and of scalar triples) kept
/// on one line, so rule and membership tables read as rows.
void write_json(std::ostream& out, const ordered_json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  if (v.is_object() && !v.empty()) {
    out << "{\n";
    std::size_t i = 0;
    for (const auto& [key, item] : v.items()) {
      out << pad << ordered_json(key).dump() << ": ";
      write_json(out, item, depth + 1);
      out << (++i < v.size() ? ",\n" : "\n");
    }
    out << close << '}';
  } else if (v.is_array() && !v.empty() && !scalar_array(v)) {
    out << "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      out << pad;
      write_json(out, v[i], depth + 1);
      out << (i + 1 < v.size() ? ",\n" : "\n");
    }
    out << close << ']';
  } else if (v.is_array()) {
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i].dump();
    out << ']';
  } else {
    out << v.dump();
  }
}

}  // namespace

ordered_json model_to_json(const Model& model) {
  ordered_json doc;
  doc["format"] = kModelFormat;
  ordered_json attributes = ordered_json::array();
  for (std::size_t i = 0; i < model.partitions.size(); ++i) {
    const auto& part = model.partitions[i];
    ordered_json mfs = ordered_json::array();
    for (const auto& mf : part.mfs()) mfs.push_back({mf.a, mf.b, mf.c});
    ordered_json a;
    a["name"] = model.attribute_names[i];
    a["min"] = part.min();
    a["max"] = part.max();
    a["mfs"] = std::move(mfs);
    attributes.push_back(std::move(a));
  }
  doc["attributes"] = std::move(attributes);
  doc["classes"] = model.class_values;
  doc["positive_class"] = model.class_values[static_cast<std::size_t>(model.positive_class - 1)];
  doc["majority_class"] = model.class_values[static_cast<std::size_t>(model.majority_class - 1)];
  doc["decision"] = decision_name(model.decision);
  doc["p"] = model.rules.p;

  ordered_json rules = ordered_json::array();
  for (const auto& rule : model.rules.rules) {
    ordered_json r;
    r["antecedents"] = rule.antecedents;
    r["class"] = rule.consequent;
    r["connective"] = std::string(to_string(rule.connective));
    r["weight"] = round_weight(rule.weight);
    rules.push_back(std::move(r));
  }
  doc["rules"] = std::move(rules);

  const auto& t = model.training;
  ordered_json training;
  training["optimizer"] = t.optimizer;
  training["seed"] = t.seed;
  training["params_digest"] = t.params_digest;
  training["train_records"] = t.train_records;
  training["fitness"] = {{"g1", t.fitness.g1}, {"g2", t.fitness.g2}, {"g3", t.fitness.g3}, {"G", t.fitness.G}};
  doc["training"] = std::move(training);
  return doc;
}

Model model_from_json(const json& doc) {
  if (!doc.is_object()) bad("<root>", "expected an object");
  const std::string format = text(require(doc, "format", ""), "format");
  if (format != kModelFormat) bad("format", fmt::format("unsupported format '{}' (expected {})", format, kModelFormat));

  Model model;
  const int p = integer(require(doc, "p", ""), "p");
  if (p < 2 || p > 255) bad("p", fmt::format("{} must lie in 2..255", p));

  const auto& attributes = array(require(doc, "attributes", ""), "attributes");
  if (attributes.empty()) bad("attributes", "at least one attribute is required");
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    const std::string path = fmt::format("attributes[{}]", i);
    const auto& a = attributes[i];
    if (!a.is_object()) bad(path, "expected an object");
    model.attribute_names.push_back(text(require(a, "name", path), path + ".name"));
    const double lo = number(require(a, "min", path), path + ".min");
    const double hi = number(require(a, "max", path), path + ".max");
    const auto& mfs = array(require(a, "mfs", path), path + ".mfs");
    std::vector<TriangularMF> parsed;
    for (std::size_t k = 0; k < mfs.size(); ++k) {
      const std::string mf_path = fmt::format("{}.mfs[{}]", path, k);
      const auto& t = mfs[k];
      if (!t.is_array() || t.size() != 3) bad(mf_path, "expected an [a, b, c] triple");
      parsed.push_back({number(t[0], mf_path), number(t[1], mf_path), number(t[2], mf_path)});
    }
    try {
      model.partitions.emplace_back(i, lo, hi, std::move(parsed));
    } catch (const std::invalid_argument& e) {
      bad(path, e.what());
    }
    if (model.partitions.back().size() != p) {
      bad(path + ".mfs", fmt::format("has {} triples, expected p = {}", model.partitions.back().size(), p));
    }
  }

  for (const auto& v : array(require(doc, "classes", ""), "classes")) model.class_values.push_back(text(v, "classes"));
  if (model.class_values.size() < 2) bad("classes", "at least two classes are required");
  const int c = static_cast<int>(model.class_values.size());
  model.positive_class = class_id(model.class_values, text(require(doc, "positive_class", ""), "positive_class"),
                                  "positive_class");
  model.majority_class = class_id(model.class_values, text(require(doc, "majority_class", ""), "majority_class"),
                                  "majority_class");
  const std::string decision = text(require(doc, "decision", ""), "decision");
  if (decision == "winner") {
    model.decision = Decision::WinnerTakesAll;
  } else if (decision == "class-sum") {
    model.decision = Decision::ClassSum;
  } else {
    bad("decision", fmt::format("unknown value '{}'", decision));
  }

  const int m = static_cast<int>(model.partitions.size());
  model.rules.m = m;
  model.rules.p = p;
  model.rules.c = c;
  const auto& rules = array(require(doc, "rules", ""), "rules");
  if (rules.empty()) bad("rules", "at least one rule is required");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string path = fmt::format("rules[{}]", i);
    const auto& r = rules[i];
    if (!r.is_object()) bad(path, "expected an object");
    Rule rule;
    const auto& ante = array(require(r, "antecedents", path), path + ".antecedents");
    if (static_cast<int>(ante.size()) != m) bad(path + ".antecedents", fmt::format("expected {} entries", m));
    for (const auto& v : ante) {
      const int k = integer(v, path + ".antecedents");
      if (k < 0 || k > p) bad(path + ".antecedents", fmt::format("label {} outside 0..{}", k, p));
      rule.antecedents.push_back(k);
    }
    rule.consequent = integer(require(r, "class", path), path + ".class");
    if (rule.consequent < 1 || rule.consequent > c) bad(path + ".class", fmt::format("{} outside 1..{}", rule.consequent, c));
    const std::string conn = text(require(r, "connective", path), path + ".connective");
    if (conn == "AND") {
      rule.connective = Connective::And;
    } else if (conn == "OR") {
      rule.connective = Connective::Or;
    } else {
      bad(path + ".connective", fmt::format("unknown value '{}'", conn));
    }
    rule.weight = number(require(r, "weight", path), path + ".weight");
    if (!(rule.weight >= 0.0 && rule.weight <= 1.0)) bad(path + ".weight", "must lie in [0, 1]");
    model.rules.rules.push_back(std::move(rule));
  }

  if (const auto it = doc.find("training"); it != doc.end()) {
    const auto& t = *it;
    if (!t.is_object()) bad("training", "expected an object");
    auto& info = model.training;
    if (t.contains("optimizer")) info.optimizer = text(t["optimizer"], "training.optimizer");
    if (t.contains("seed")) {
      if (!t["seed"].is_number_unsigned()) bad("training.seed", "expected a non-negative integer");
      info.seed = t["seed"].get<std::uint64_t>();
    }
    if (t.contains("params_digest")) info.params_digest = text(t["params_digest"], "training.params_digest");
    if (t.contains("train_records")) {
      if (!t["train_records"].is_number_unsigned()) bad("training.train_records", "expected a non-negative integer");
      info.train_records = t["train_records"].get<std::size_t>();
    }
    if (t.contains("fitness")) {
      const auto& f = t["fitness"];
      info.fitness.g1 = number(require(f, "g1", "training.fitness"), "training.fitness.g1");
      info.fitness.g2 = number(require(f, "g2", "training.fitness"), "training.fitness.g2");
      info.fitness.g3 = number(require(f, "g3", "training.fitness"), "training.fitness.g3");
      info.fitness.G = number(require(f, "G", "training.fitness"), "training.fitness.G");
    }
  }
  return model;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write model file '{}'", path.string()));
  write_json(out, model_to_json(model), 0);
  out << '\n';
  if (!out) throw std::runtime_error(fmt::format("failed writing model file '{}'", path.string()));
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open model file '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return model_from_json(doc);
}

}  // namespace fuzzybso
