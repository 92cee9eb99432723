#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

namespace shadowforge {

/// Float-blob container: u64-LE header length, JSON header bytes, u64-LE
/// payload byte length, raw little-endian float32 data. The header receives a
/// "payload_sha256" entry; load verifies it and fails on truncation.
void save_blob(const std::filesystem::path& path, nlohmann::json header,
               std::span<const float> payload);

struct Blob {
  nlohmann::json header;
  std::vector<float> payload;
};

Blob load_blob(const std::filesystem::path& path);

}  // namespace shadowforge
