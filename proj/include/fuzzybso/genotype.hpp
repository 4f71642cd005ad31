#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fuzzybso {

using Genotype = std::vector<double>;

struct GeneBounds {
  double lo = 0.0;
  double hi = 0.0;
};

/// Per-gene search box. Optimizers sample inside it and clamp back into it.
struct GenotypeSpec {
  std::vector<GeneBounds> bounds;

  std::size_t size() const { return bounds.size(); }
  void clamp(std::span<double> genes) const;
  bool contains(std::span<const double> genes) const;

  /// Same bounds for every gene.
  static GenotypeSpec box(std::size_t length, double lo, double hi);
};

}  // namespace fuzzybso
