#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fuzzybso {

/// Row-major table of real attributes with dense class labels 1..c.
///
/// Original label values are kept in `class_values` (index j holds the value
/// mapped to class j+1), sorted numerically when every label parses as a
/// number and lexicographically otherwise.
class Dataset {
 public:
  Dataset() = default;
  /// Validates the invariants: every row has m finite values, labels in 1..c,
  /// n >= 2 and, when `require_all_classes` is set, every class present.
  /// Evaluation slices built against a model's label mapping relax the last one.
  Dataset(std::vector<std::string> attribute_names, std::vector<std::string> class_values,
          std::vector<double> values, std::vector<int> labels, bool require_all_classes = true);

  std::size_t size() const { return labels_.size(); }
  std::size_t attribute_count() const { return names_.size(); }
  int class_count() const { return static_cast<int>(class_values_.size()); }

  std::span<const double> record(std::size_t i) const {
    return {values_.data() + i * attribute_count(), attribute_count()};
  }
  double value(std::size_t i, std::size_t attribute) const {
    return values_[i * attribute_count() + attribute];
  }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }

  const std::vector<std::string>& attribute_names() const { return names_; }
  const std::vector<std::string>& class_values() const { return class_values_; }

  /// Records per class, index j holding the count of class j+1.
  std::vector<std::size_t> class_counts() const;
  /// Most frequent class; ties go to the smaller class id.
  int majority_class() const;

  /// Subset by record indices, keeping the class mapping. Unlike the
  /// constructor this does not require every class to be present.
  Dataset select(std::span<const std::size_t> indices) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::string> class_values_;
  std::vector<double> values_;
  std::vector<int> labels_;
};

/// Label column selector: empty = last column; a header name; or a 0-based index.
struct LabelColumn {
  std::string spec;
};

/// Reads a comma-separated file. The first row is a header when its label
/// cell does not parse as a number.
Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label = {});

/// Same, but maps labels through a known class mapping (e.g. a trained
/// model's). Labels outside the mapping are a DataError; classes may be absent.
Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label,
                 const std::vector<std::string>& class_values);

/// Index (1-based class id) of `value` in `class_values`, comparing numerically
/// when both parse as numbers; 0 when absent.
int find_class(const std::vector<std::string>& class_values, const std::string& value);

struct AttributeStats {
  std::size_t index = 0;
  double min = 0.0;
  double max = 0.0;
  bool constant() const { return min == max; }
};

std::vector<AttributeStats> attribute_stats(const Dataset& d);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 1;
};

struct Split {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

/// Per-class train quotas for a stratified split; throws DataError if some
/// class cannot keep a record on both sides.
std::vector<std::size_t> stratified_quotas(std::span<const std::size_t> class_counts, double fraction);

/// Stratified random split. Record order within each side follows the source.
Split split(const Dataset& d, const SplitSpec& spec);

}  // namespace fuzzybso
