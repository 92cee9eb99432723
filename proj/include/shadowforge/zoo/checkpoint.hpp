#pragma once

#include <filesystem>
#include <string>

#include "shadowforge/zoo/registry.hpp"

namespace shadowforge {

struct CheckpointMeta {
  int epochs = 0;
  double final_lr = 0.0;
  std::string dataset_id;
  uint64_t seed = 0;

  bool operator==(const CheckpointMeta&) const = default;
};

/// Binary checkpoint: JSON header (spec + metadata + tensor sizes) followed by
/// raw little-endian float32 parameters, then normalization running stats.
void save_checkpoint(const std::filesystem::path& path, const Network<float>& net,
                     const ClassifierSpec& spec, const CheckpointMeta& meta);

struct LoadedCheckpoint {
  Network<float> net;
  ClassifierSpec spec;
  CheckpointMeta meta;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace shadowforge
