#pragma once

#include <cstdint>
#include <vector>

namespace shadowforge {

/// Pick q pool indices with per-class counts equal up to 1. The q mod K extra
/// picks go to the first classes of a seeded shuffle of class order; within a
/// class, membership is a seeded draw. Deterministic in (labels, q, seed).
///
/// When per-sample `scores` are supplied (one per pool entry, e.g. a model's
/// confidence), each class emits its members in a coverage stream instead of
/// a uniform draw: members are ranked by score and visited in bit-reversal
/// order with a seeded rotation, so every prefix of the stream spreads evenly
/// across the score range and a larger q extends a smaller one's selection.
std::vector<int> stratified_select_indices(const std::vector<int>& pool_labels,
                                           int num_classes, int q, uint64_t seed,
                                           const std::vector<double>& scores = {});

}  // namespace shadowforge
