#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "shadowforge/synth/backend.hpp"

namespace shadowforge {

/// Content-addressed PNG store under <root>/<first 2 hex of key>/<key>.png.
/// The key covers everything that changes the produced image: prompt, seed,
/// service id, inference steps, and the requested pixel dimensions.
class ImageCache {
 public:
  explicit ImageCache(std::filesystem::path root);

  static std::string key(const GenerationRequest& req);
  std::filesystem::path path_for(const std::string& key) const;
  bool contains(const GenerationRequest& req) const;

  /// Cached bytes when present; otherwise one backend call, persisted via
  /// write-temp-then-rename so concurrent readers never see partial files.
  std::vector<uint8_t> get_or_generate(const GenerationRequest& req,
                                       TextToImageBackend& backend);

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

}  // namespace shadowforge
