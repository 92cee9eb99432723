#include "shadowforge/train/stratified.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "shadowforge/core/errors.hpp"
#include "shadowforge/core/rng.hpp"

namespace shadowforge {

namespace {

/// Reverse the low `bits` bits of v.
uint64_t bit_reverse(uint64_t v, int bits) {
  uint64_t r = 0;
  for (int i = 0; i < bits; ++i) r |= ((v >> i) & 1u) << (bits - 1 - i);
  return r;
}

/// Emit the members of `ranked` (score order) as a coverage stream: visit
/// rank positions in bit-reversal order, rotated by a seeded offset, and take
/// the first `count`. Every prefix spreads near-uniformly over the ranking,
/// and prefixes are nested across increasing counts.
std::vector<int> coverage_take(const std::vector<int>& ranked, int count, Rng& rng) {
  const int n = static_cast<int>(ranked.size());
  int bits = 1;
  while ((1 << bits) < n) ++bits;
  const int offset = n > 0 ? static_cast<int>(rng.uniform_int(0, n - 1)) : 0;
  std::vector<int> out;
  out.reserve(count);
  for (uint64_t j = 0; j < (uint64_t{1} << bits) && static_cast<int>(out.size()) < count;
       ++j) {
    const uint64_t pos = bit_reverse(j, bits);
    if (pos < static_cast<uint64_t>(n))
      out.push_back(ranked[(pos + offset) % n]);
  }
  return out;
}

}  // namespace

std::vector<int> stratified_select_indices(const std::vector<int>& pool_labels,
                                           int num_classes, int q, uint64_t seed,
                                           const std::vector<double>& scores) {
  if (num_classes < 1)
    throw InvalidInput("stratified_select: num_classes must be >= 1");
  if (q < 1) throw InvalidInput("stratified_select: q must be >= 1");
  if (q > static_cast<int>(pool_labels.size()))
    throw InvalidInput("stratified_select: q=" + std::to_string(q) +
                       " exceeds pool size " + std::to_string(pool_labels.size()));
  if (!scores.empty() && scores.size() != pool_labels.size())
    throw InvalidInput("stratified_select: scores size " +
                       std::to_string(scores.size()) + " != pool size " +
                       std::to_string(pool_labels.size()));

  std::vector<std::vector<int>> by_class(num_classes);
  for (size_t i = 0; i < pool_labels.size(); ++i) {
    const int y = pool_labels[i];
    if (y < 0 || y >= num_classes)
      throw InvalidInput("stratified_select: label " + std::to_string(y) +
                         " out of range");
    by_class[y].push_back(static_cast<int>(i));
  }

  std::vector<int> counts(num_classes, q / num_classes);
  const int remainder = q % num_classes;
  if (remainder > 0) {
    std::vector<int> class_order(num_classes);
    std::iota(class_order.begin(), class_order.end(), 0);
    Rng rng(derive_seed(seed, "stratified-remainder"));
    rng.shuffle(class_order);
    for (int i = 0; i < remainder; ++i) counts[class_order[i]] += 1;
  }

  std::vector<int> selected;
  selected.reserve(q);
  for (int c = 0; c < num_classes; ++c) {
    if (counts[c] > static_cast<int>(by_class[c].size()))
      throw InvalidInput("stratified_select: class " + std::to_string(c) + " has " +
                         std::to_string(by_class[c].size()) + " images, needs " +
                         std::to_string(counts[c]));
    Rng rng(derive_seed(derive_seed(seed, "stratified-class"),
                        static_cast<uint64_t>(c)));
    if (scores.empty()) {
      rng.shuffle(by_class[c]);
      selected.insert(selected.end(), by_class[c].begin(),
                      by_class[c].begin() + counts[c]);
    } else {
      std::sort(by_class[c].begin(), by_class[c].end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] < scores[b];
        return a < b;
      });
      const std::vector<int> picked = coverage_take(by_class[c], counts[c], rng);
      selected.insert(selected.end(), picked.begin(), picked.end());
    }
  }
  return selected;
}

}  // namespace shadowforge
