#include "shadowforge/synth/cache.hpp"

#include "shadowforge/core/errors.hpp"
#include "shadowforge/core/hashing.hpp"
#include "shadowforge/core/image_io.hpp"

namespace shadowforge {

ImageCache::ImageCache(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::string ImageCache::key(const GenerationRequest& req) {
  req.validate();
  std::string canonical = req.prompt;
  canonical += '\n';
  canonical += std::to_string(req.seed);
  canonical += '\n';
  canonical += req.service_id;
  canonical += '\n';
  canonical += std::to_string(req.inference_steps);
  canonical += '\n';
  canonical += std::to_string(req.native_resolution) + "x" +
               std::to_string(req.native_resolution);
  return sha256_hex(canonical);
}

std::filesystem::path ImageCache::path_for(const std::string& key) const {
  return root_ / key.substr(0, 2) / (key + ".png");
}

bool ImageCache::contains(const GenerationRequest& req) const {
  return std::filesystem::exists(path_for(key(req)));
}

std::vector<uint8_t> ImageCache::get_or_generate(const GenerationRequest& req,
                                                 TextToImageBackend& backend) {
  const auto path = path_for(key(req));
  if (std::filesystem::exists(path)) return read_file(path);
  auto bytes = backend.generate_png(req);
  std::filesystem::create_directories(path.parent_path());
  write_file_atomic(path, bytes);
  return bytes;
}

}  // namespace shadowforge
