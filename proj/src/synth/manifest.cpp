#include "shadowforge/synth/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include <json.hpp>

#include "shadowforge/core/errors.hpp"
#include "shadowforge/core/hashing.hpp"
#include "shadowforge/core/image_io.hpp"

namespace shadowforge {

std::string iso8601_utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

void save_manifest(const std::filesystem::path& path, const SyntheticManifest& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : m.entries) {
    entries.push_back({{"image_path", e.image_path},
                       {"class_index", e.class_index},
                       {"prompt", e.prompt},
                       {"seed", e.seed},
                       {"service_id", e.service_id},
                       {"sha256", e.sha256}});
  }
  nlohmann::json j = {{"schema_version", 1},
                      {"target_shape", {m.target_shape.channels, m.target_shape.height,
                                        m.target_shape.width}},
                      {"created_at", m.created_at},
                      {"entries", std::move(entries)}};
  const std::string text = j.dump(2) + "\n";
  write_file_atomic(path, std::span<const uint8_t>(
                              reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

SyntheticManifest load_manifest(const std::filesystem::path& path) {
  auto bytes = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const std::exception& e) {
    throw IoError("load_manifest: " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
    throw IoError("load_manifest: unsupported schema_version in " + path.string());
  SyntheticManifest m;
  auto shape = j.at("target_shape");
  m.target_shape = {shape.at(0).get<int>(), shape.at(1).get<int>(), shape.at(2).get<int>()};
  m.created_at = j.at("created_at").get<std::string>();
  for (const auto& e : j.at("entries")) {
    ManifestEntry entry;
    entry.image_path = e.at("image_path").get<std::string>();
    entry.class_index = e.at("class_index").get<int>();
    entry.prompt = e.at("prompt").get<std::string>();
    entry.seed = e.at("seed").get<uint64_t>();
    entry.service_id = e.at("service_id").get<std::string>();
    entry.sha256 = e.at("sha256").get<std::string>();
    m.entries.push_back(std::move(entry));
  }
  return m;
}

void verify_manifest(const SyntheticManifest& m, const std::filesystem::path& base_dir) {
  for (const auto& e : m.entries) {
    const auto path = base_dir / e.image_path;
    if (!std::filesystem::exists(path))
      throw IoError("verify_manifest: missing image file " + path.string());
    auto bytes = read_file(path);
    auto digest = sha256_hex(std::span<const uint8_t>(bytes.data(), bytes.size()));
    if (digest != e.sha256)
      throw IoError("verify_manifest: hash mismatch for " + path.string());
  }
}

}  // namespace shadowforge
