#include "fuzzybso/membership.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace fuzzybso {

double TriangularMF::degree(double x) const {
  if (x < a || x > c) return 0.0;
  if (x == b) return 1.0;
  if (x < b) return (x - a) / (b - a);
  return (c - x) / (c - b);
}

FuzzyPartition FuzzyPartition::uniform(const AttributeStats& stats, int p) {
  if (p < 2) throw std::invalid_argument(fmt::format("membership function count p={} must be >= 2", p));
  std::vector<TriangularMF> mfs(static_cast<std::size_t>(p));
  if (stats.constant()) {
    for (auto& mf : mfs) mf = {stats.min, stats.min, stats.min};
    return FuzzyPartition(stats.index, stats.min, stats.max, std::move(mfs));
  }
  std::vector<double> peaks(static_cast<std::size_t>(p));
  const double step = (stats.max - stats.min) / static_cast<double>(p - 1);
  for (int k = 0; k < p; ++k) peaks[static_cast<std::size_t>(k)] = stats.min + k * step;
  peaks.back() = stats.max;
  for (std::size_t k = 0; k < peaks.size(); ++k) {
    mfs[k].a = k == 0 ? peaks[k] : peaks[k - 1];
    mfs[k].b = peaks[k];
    mfs[k].c = k + 1 == peaks.size() ? peaks[k] : peaks[k + 1];
  }
  return FuzzyPartition(stats.index, stats.min, stats.max, std::move(mfs));
}

FuzzyPartition::FuzzyPartition(std::size_t attribute, double min, double max, std::vector<TriangularMF> mfs)
    : attribute_(attribute), min_(min), max_(max), mfs_(std::move(mfs)) {
  if (mfs_.size() < 2) throw std::invalid_argument("a fuzzy partition needs at least 2 membership functions");
  if (!(min_ <= max_)) throw std::invalid_argument("partition range has min > max");
  for (const auto& mf : mfs_) {
    if (!(mf.a <= mf.b && mf.b <= mf.c)) {
      throw std::invalid_argument(fmt::format("membership function ({}, {}, {}) is not ordered", mf.a, mf.b, mf.c));
    }
  }
}

double FuzzyPartition::degree(int k, double x) const {
  if (degenerate()) return k == 1 ? 1.0 : 0.0;
  const double clamped = std::clamp(x, min_, max_);
  return mfs_[static_cast<std::size_t>(k - 1)].degree(clamped);
}

int FuzzyPartition::fuzzify(double x) const {
  int best = 1;
  double best_degree = degree(1, x);
  for (int k = 2; k <= size(); ++k) {
    const double d = degree(k, x);
    if (d > best_degree) {
      best = k;
      best_degree = d;
    }
  }
  return best;
}

std::vector<FuzzyPartition> build_partitions(std::span<const AttributeStats> stats, int p) {
  std::vector<FuzzyPartition> parts;
  parts.reserve(stats.size());
  for (const auto& s : stats) parts.push_back(FuzzyPartition::uniform(s, p));
  return parts;
}

LabeledDataset fuzzify_dataset(std::span<const FuzzyPartition> partitions, const Dataset& d) {
  if (partitions.size() != d.attribute_count()) {
    throw std::invalid_argument(fmt::format("{} partitions for {} attributes", partitions.size(), d.attribute_count()));
  }
  LabeledDataset ld;
  ld.n = d.size();
  ld.m = d.attribute_count();
  ld.p = partitions.empty() ? 0 : partitions.front().size();
  ld.c = d.class_count();
  ld.labels.resize(ld.n * ld.m);
  ld.classes.assign(d.labels().begin(), d.labels().end());
  for (std::size_t i = 0; i < ld.n; ++i) {
    for (std::size_t j = 0; j < ld.m; ++j) {
      ld.labels[i * ld.m + j] = static_cast<std::uint8_t>(partitions[j].fuzzify(d.value(i, j)));
    }
  }
  return ld;
}

}  // namespace fuzzybso
