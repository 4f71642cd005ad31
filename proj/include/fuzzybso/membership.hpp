#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fuzzybso/dataset.hpp"

namespace fuzzybso {

/// Triangle with feet at a and c and peak at b. a == b or b == c gives a
/// shoulder that is 1 at the coincident breakpoint.
struct TriangularMF {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double degree(double x) const;
  friend bool operator==(const TriangularMF&, const TriangularMF&) = default;
};

/// p triangular membership functions over one attribute's range whose degrees
/// sum to one at every point of [min, max]. Inputs are clamped to the range.
class FuzzyPartition {
 public:
  /// Evenly spaced peaks from min to max, feet on the neighbouring peaks.
  /// A constant attribute gives the degenerate partition: label 1 with degree 1.
  static FuzzyPartition uniform(const AttributeStats& stats, int p);

  /// Rebuilds a partition from stored breakpoints (model files).
  FuzzyPartition(std::size_t attribute, double min, double max, std::vector<TriangularMF> mfs);

  std::size_t attribute() const { return attribute_; }
  int size() const { return static_cast<int>(mfs_.size()); }
  double min() const { return min_; }
  double max() const { return max_; }
  bool degenerate() const { return min_ == max_; }
  const std::vector<TriangularMF>& mfs() const { return mfs_; }

  /// Degree of label k (1..p) at x.
  double degree(int k, double x) const;
  /// Label with the largest degree; ties go to the smaller label.
  int fuzzify(double x) const;

 private:
  std::size_t attribute_ = 0;
  double min_ = 0.0;
  double max_ = 0.0;
  std::vector<TriangularMF> mfs_;
};

/// Builds one partition per attribute from the given (training) statistics.
std::vector<FuzzyPartition> build_partitions(std::span<const AttributeStats> stats, int p);

/// A dataset with every attribute replaced by its fuzzy label.
struct LabeledDataset {
  std::size_t n = 0;
  std::size_t m = 0;
  int p = 0;
  int c = 0;
  std::vector<std::uint8_t> labels;  // n x m, row-major, values 1..p
  std::vector<int> classes;          // n, values 1..c

  std::span<const std::uint8_t> record(std::size_t i) const { return {labels.data() + i * m, m}; }
};

LabeledDataset fuzzify_dataset(std::span<const FuzzyPartition> partitions, const Dataset& d);

}  // namespace fuzzybso
