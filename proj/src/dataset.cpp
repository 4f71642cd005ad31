#include "fuzzybso/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "fuzzybso/errors.hpp"
#include "fuzzybso/random.hpp"

namespace fuzzybso {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_real(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

struct RawTable {
  std::vector<std::string> header;  // empty when the file has none
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

std::size_t resolve_label_column(const LabelColumn& label, const std::vector<std::string>& header,
                                 std::size_t columns) {
  if (label.spec.empty()) return columns - 1;
  if (!header.empty()) {
    const auto it = std::find(header.begin(), header.end(), label.spec);
    if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
  }
  std::size_t index = 0;
  const auto* end = label.spec.data() + label.spec.size();
  const auto [ptr, ec] = std::from_chars(label.spec.data(), end, index);
  if (ec != std::errc{} || ptr != end) {
    throw DataError(fmt::format("label column '{}' not found{}", label.spec,
                                header.empty() ? " (file has no header; use a 0-based index)" : ""));
  }
  if (index >= columns) {
    throw DataError(fmt::format("label column index {} out of range (file has {} columns)", index, columns));
  }
  return index;
}

RawTable read_table(const std::filesystem::path& path, const LabelColumn& label, std::size_t& label_col) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open data file '{}'", path.string()));

  RawTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_row(line);
    if (first) {
      columns = cells.size();
      if (columns < 2) {
        throw DataError(fmt::format("{}:{}: need at least 2 columns, found {}", path.string(), line_no, columns));
      }
      // Header detection needs the label column, which may be named by the header itself.
      const bool named = !label.spec.empty() &&
                         std::find(cells.begin(), cells.end(), label.spec) != cells.end();
      std::size_t candidate = 0;
      if (named) {
        candidate = static_cast<std::size_t>(std::find(cells.begin(), cells.end(), label.spec) - cells.begin());
      } else {
        candidate = resolve_label_column(label, {}, columns);
      }
      first = false;
      if (named || !parse_real(cells[candidate])) {
        table.header = std::move(cells);
        label_col = resolve_label_column(label, table.header, columns);
        continue;
      }
      label_col = candidate;
    }
    if (cells.size() != columns) {
      throw DataError(fmt::format("{}:{}: ragged row, expected {} columns, found {}", path.string(), line_no,
                                  columns, cells.size()));
    }
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(line_no);
  }
  if (first) throw DataError(fmt::format("data file '{}' is empty", path.string()));
  return table;
}

bool numeric_less(const std::string& a, const std::string& b) { return *parse_real(a) < *parse_real(b); }

Dataset assemble(const std::filesystem::path& path, const RawTable& table, std::size_t label_col,
                 const std::vector<std::string>& class_values, bool require_all_classes) {
  const std::size_t columns = table.header.empty() ? table.rows.front().size() : table.header.size();
  std::vector<std::string> names;
  for (std::size_t j = 0; j < columns; ++j) {
    if (j == label_col) continue;
    names.push_back(table.header.empty() ? fmt::format("A{}", names.size() + 1) : table.header[j]);
  }

  std::vector<double> values;
  values.reserve(table.rows.size() * (columns - 1));
  std::vector<int> labels;
  labels.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    for (std::size_t j = 0; j < columns; ++j) {
      if (j == label_col) continue;
      const auto v = parse_real(row[j]);
      if (!v) {
        throw DataError(fmt::format("{}:{}: column {}: '{}' is not a finite real number", path.string(),
                                    table.line_numbers[i], j, row[j]));
      }
      values.push_back(*v);
    }
    const int cls = find_class(class_values, row[label_col]);
    if (cls == 0) {
      throw DataError(fmt::format("{}:{}: column {}: label '{}' is not a known class", path.string(),
                                  table.line_numbers[i], label_col, row[label_col]));
    }
    labels.push_back(cls);
  }
  try {
    return Dataset(std::move(names), class_values, std::move(values), std::move(labels), require_all_classes);
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace

Dataset::Dataset(std::vector<std::string> attribute_names, std::vector<std::string> class_values,
                 std::vector<double> values, std::vector<int> labels, bool require_all_classes)
    : names_(std::move(attribute_names)),
      class_values_(std::move(class_values)),
      values_(std::move(values)),
      labels_(std::move(labels)) {
  const std::size_t m = names_.size();
  if (m == 0) throw DataError("dataset needs at least one attribute");
  if (values_.size() != labels_.size() * m) {
    throw DataError(fmt::format("dataset has {} values for {} records of {} attributes", values_.size(),
                                labels_.size(), m));
  }
  const std::size_t min_records = require_all_classes ? 2 : 1;
  if (labels_.size() < min_records) {
    throw DataError(fmt::format("dataset needs at least {} records, found {}", min_records, labels_.size()));
  }
  if (require_all_classes && class_values_.size() < 2) {
    throw DataError(fmt::format("need at least 2 distinct class labels, found {}", class_values_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw DataError(fmt::format("record {} attribute {} is not finite", k / m, k % m));
    }
  }
  std::vector<bool> seen(class_values_.size(), false);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const int y = labels_[i];
    if (y < 1 || y > class_count()) {
      throw DataError(fmt::format("record {} has class {} outside 1..{}", i, y, class_count()));
    }
    seen[static_cast<std::size_t>(y - 1)] = true;
  }
  if (require_all_classes) {
    for (std::size_t j = 0; j < seen.size(); ++j) {
      if (!seen[j]) throw DataError(fmt::format("class '{}' has no records", class_values_[j]));
    }
  }
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(class_values_.size(), 0);
  for (const int y : labels_) ++counts[static_cast<std::size_t>(y - 1)];
  return counts;
}

int Dataset::majority_class() const {
  const auto counts = class_counts();
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin()) + 1;
}

Dataset Dataset::select(std::span<const std::size_t> indices) const {
  const std::size_t m = attribute_count();
  std::vector<double> values;
  values.reserve(indices.size() * m);
  std::vector<int> labels;
  labels.reserve(indices.size());
  for (const auto i : indices) {
    const auto rec = record(i);
    values.insert(values.end(), rec.begin(), rec.end());
    labels.push_back(labels_[i]);
  }
  return Dataset(names_, class_values_, std::move(values), std::move(labels), false);
}

int find_class(const std::vector<std::string>& class_values, const std::string& value) {
  const auto v = parse_real(value);
  for (std::size_t j = 0; j < class_values.size(); ++j) {
    if (class_values[j] == value) return static_cast<int>(j) + 1;
    if (v) {
      const auto c = parse_real(class_values[j]);
      if (c && *c == *v) return static_cast<int>(j) + 1;
    }
  }
  return 0;
}

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label) {
  std::size_t label_col = 0;
  const auto table = read_table(path, label, label_col);
  if (table.rows.empty()) throw DataError(fmt::format("data file '{}' has no records", path.string()));

  std::vector<std::string> distinct;
  for (const auto& row : table.rows) distinct.push_back(row[label_col]);
  const bool numeric = std::all_of(distinct.begin(), distinct.end(),
                                   [](const std::string& s) { return parse_real(s).has_value(); });
  if (numeric) {
    std::sort(distinct.begin(), distinct.end(), numeric_less);
    distinct.erase(std::unique(distinct.begin(), distinct.end(),
                               [](const auto& a, const auto& b) { return *parse_real(a) == *parse_real(b); }),
                   distinct.end());
  } else {
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  }
  if (distinct.size() < 2) {
    throw DataError(fmt::format("{}: column {}: need at least 2 distinct class labels, found {}", path.string(),
                                label_col, distinct.size()));
  }
  return assemble(path, table, label_col, distinct, true);
}

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label,
                 const std::vector<std::string>& class_values) {
  std::size_t label_col = 0;
  const auto table = read_table(path, label, label_col);
  if (table.rows.empty()) throw DataError(fmt::format("data file '{}' has no records", path.string()));
  return assemble(path, table, label_col, class_values, false);
}

std::vector<AttributeStats> attribute_stats(const Dataset& d) {
  std::vector<AttributeStats> stats(d.attribute_count());
  for (std::size_t j = 0; j < stats.size(); ++j) {
    stats[j].index = j;
    stats[j].min = d.value(0, j);
    stats[j].max = d.value(0, j);
  }
  for (std::size_t i = 1; i < d.size(); ++i) {
    for (std::size_t j = 0; j < stats.size(); ++j) {
      stats[j].min = std::min(stats[j].min, d.value(i, j));
      stats[j].max = std::max(stats[j].max, d.value(i, j));
    }
  }
  return stats;
}

std::vector<std::size_t> stratified_quotas(std::span<const std::size_t> class_counts, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw DataError(fmt::format("train fraction {} must lie in (0, 1)", fraction));
  }
  const std::size_t n = std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0});
  const auto target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));

  // Largest-remainder apportionment keeps each class within one record of its share.
  std::vector<std::size_t> quota(class_counts.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t j = 0; j < class_counts.size(); ++j) {
    const double exact = fraction * static_cast<double>(class_counts[j]);
    quota[j] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[j];
    remainders.emplace_back(exact - std::floor(exact), j);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t t = 0; assigned < target && t < remainders.size(); ++t) {
    ++quota[remainders[t].second];
    ++assigned;
  }

  for (std::size_t j = 0; j < class_counts.size(); ++j) {
    if (class_counts[j] < 2) {
      throw DataError(fmt::format("class {} has {} record(s); a split needs at least one on each side", j + 1,
                                  class_counts[j]));
    }
    quota[j] = std::clamp<std::size_t>(quota[j], 1, class_counts[j] - 1);
  }
  return quota;
}

Split split(const Dataset& d, const SplitSpec& spec) {
  const auto counts = d.class_counts();
  const auto quota = stratified_quotas(counts, spec.train_fraction);

  Rng rng(spec.seed);
  std::vector<bool> in_train(d.size(), false);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d.label(i) == static_cast<int>(j) + 1) members.push_back(i);
    }
    // Partial Fisher-Yates: the first quota[j] slots become the train sample.
    for (std::size_t t = 0; t < quota[j]; ++t) {
      const auto pick = t + rng.index(members.size() - t);
      std::swap(members[t], members[pick]);
      in_train[members[t]] = true;
    }
  }

  Split out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    (in_train[i] ? out.train_indices : out.test_indices).push_back(i);
  }
  out.train = d.select(out.train_indices);
  out.test = d.select(out.test_indices);
  return out;
}

}  // namespace fuzzybso
