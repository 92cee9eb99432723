#pragma once

#include <filesystem>
#include <vector>

#include "shadowforge/core/types.hpp"
#include "shadowforge/synth/manifest.hpp"
#include "shadowforge/synth/patterns.hpp"

namespace shadowforge {

/// Images plus ground-truth labels, the common currency of training and
/// evaluation.
template <typename T>
struct LabeledSet {
  ImageBatch<T> images;
  std::vector<int> labels;
  int num_classes = 0;

  int size() const { return images.size(); }

  LabeledSet subset(const std::vector<int>& idx) const {
    LabeledSet out;
    out.images = images.rows(idx);
    out.labels.reserve(idx.size());
    for (int i : idx) out.labels.push_back(labels[i]);
    out.num_classes = num_classes;
    return out;
  }
};

using LabeledSetF = LabeledSet<float>;

/// Procedural class-conditional dataset (class-major, per_class each).
/// Per-sample randomness is derived from (seed, sample index), so any slice is
/// reproducible independent of generation order.
LabeledSetF make_pattern_dataset(int num_classes, int per_class,
                                 const PatternParams& params, const TensorShape& shape,
                                 uint64_t seed);

/// Decode every manifest entry, downscale to the manifest's target shape, and
/// label it with its prompt's class index.
LabeledSetF load_dataset(const SyntheticManifest& m,
                         const std::filesystem::path& base_dir, bool verify_hashes = false);

}  // namespace shadowforge
