#pragma once

#include <filesystem>

#include "shadowforge/synth/backend.hpp"
#include "shadowforge/synth/cache.hpp"
#include "shadowforge/synth/manifest.hpp"
#include "shadowforge/synth/vocab.hpp"

namespace shadowforge {

/// What a class-balanced synthetic pool should look like.
struct PoolRequest {
  ClassVocabulary vocab;
  int per_class_count = 1;
  uint64_t base_seed = 0;
  int inference_steps = 50;
  int native_resolution = 512;
  TensorShape target_shape{3, 32, 32};
  int workers = 1;  // concurrent backend requests
};

/// Generate (or reuse from cache) K x per_class_count images, class-major,
/// entry seed = base_seed + entry index. Entries may be fetched concurrently;
/// the manifest is assembled in index order once every entry has completed.
/// image_path fields come out relative to manifest_dir.
SyntheticManifest generate_pool(const PoolRequest& req, TextToImageBackend& backend,
                                ImageCache& cache,
                                const std::filesystem::path& manifest_dir);

}  // namespace shadowforge
