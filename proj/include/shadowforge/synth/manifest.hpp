#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shadowforge/core/types.hpp"

namespace shadowforge {

struct ManifestEntry {
  std::string image_path;  // relative to the manifest's directory
  int class_index = 0;
  std::string prompt;
  uint64_t seed = 0;
  std::string service_id;
  std::string sha256;

  bool operator==(const ManifestEntry&) const = default;
};

/// Labeled synthetic dataset description: which files, which class, and how
/// they were produced. target_shape is the shape training will resize to.
struct SyntheticManifest {
  TensorShape target_shape;
  std::vector<ManifestEntry> entries;
  std::string created_at;  // ISO-8601 UTC

  int size() const { return static_cast<int>(entries.size()); }
};

std::string iso8601_utc_now();

void save_manifest(const std::filesystem::path& path, const SyntheticManifest& m);
SyntheticManifest load_manifest(const std::filesystem::path& path);

/// Every entry's file must exist under base_dir and hash to its recorded
/// sha256; throws IoError naming the first offender.
void verify_manifest(const SyntheticManifest& m, const std::filesystem::path& base_dir);

}  // namespace shadowforge
