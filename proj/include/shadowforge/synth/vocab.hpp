#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "shadowforge/core/errors.hpp"

namespace shadowforge {

/// Ordered class-name list; a name's position is its class index for the run.
struct ClassVocabulary {
  std::vector<std::string> names;

  ClassVocabulary() = default;
  explicit ClassVocabulary(std::vector<std::string> n) : names(std::move(n)) {
    std::unordered_set<std::string> seen;
    for (const auto& name : names) {
      if (name.empty()) throw InvalidInput("ClassVocabulary: empty class name");
      if (!seen.insert(name).second)
        throw InvalidInput("ClassVocabulary: duplicate class name \"" + name + "\"");
    }
  }

  int size() const { return static_cast<int>(names.size()); }
  bool empty() const { return names.empty(); }
};

/// One text prompt per class, fixed template, order preserved.
inline std::vector<std::string> build_prompts(const ClassVocabulary& vocab) {
  if (vocab.empty()) throw InvalidInput("build_prompts: empty vocabulary");
  std::vector<std::string> prompts;
  prompts.reserve(vocab.names.size());
  for (const auto& name : vocab.names) prompts.push_back("a photo of a " + name);
  return prompts;
}

/// Default class names for desk-scale runs: K names drawn from a fixed list,
/// extended with numbered names when K exceeds it.
inline ClassVocabulary default_vocabulary(int k) {
  if (k < 1) throw InvalidInput("default_vocabulary: k must be >= 1");
  static const std::vector<std::string> base = {
      "tench",   "church", "parachute", "golf ball", "chain saw",
      "cassette", "truck",  "dog",       "spider",    "fish"};
  std::vector<std::string> names;
  names.reserve(k);
  for (int i = 0; i < k; ++i) {
    if (i < static_cast<int>(base.size()))
      names.push_back(base[i]);
    else
      names.push_back("class-" + std::to_string(i));
  }
  return ClassVocabulary(std::move(names));
}

}  // namespace shadowforge
