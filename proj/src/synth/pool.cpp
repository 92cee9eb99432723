#include "shadowforge/synth/pool.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "shadowforge/core/errors.hpp"
#include "shadowforge/core/hashing.hpp"

namespace shadowforge {

SyntheticManifest generate_pool(const PoolRequest& req, TextToImageBackend& backend,
                                ImageCache& cache,
                                const std::filesystem::path& manifest_dir) {
  if (req.vocab.empty()) throw InvalidInput("generate_pool: empty vocabulary");
  if (req.per_class_count < 1)
    throw InvalidInput("generate_pool: per_class_count must be >= 1");
  if (req.native_resolution < req.target_shape.height ||
      req.native_resolution < req.target_shape.width)
    throw InvalidInput("generate_pool: native resolution " +
                       std::to_string(req.native_resolution) +
                       " below target " + req.target_shape.str());

  const auto prompts = build_prompts(req.vocab);
  const int k = req.vocab.size();
  const int total = k * req.per_class_count;
  const auto abs_manifest_dir = std::filesystem::absolute(manifest_dir);

  std::vector<ManifestEntry> entries(total);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      int idx = next.fetch_add(1, std::memory_order_relaxed);
      if (idx >= total) return;
      const int cls = idx / req.per_class_count;
      GenerationRequest gen;
      gen.prompt = prompts[cls];
      gen.class_index = cls;
      gen.seed = req.base_seed + static_cast<uint64_t>(idx);
      gen.inference_steps = req.inference_steps;
      gen.native_resolution = req.native_resolution;
      gen.service_id = backend.id();
      try {
        auto bytes = cache.get_or_generate(gen, backend);
        ManifestEntry& e = entries[idx];
        auto abs_path = std::filesystem::absolute(cache.path_for(ImageCache::key(gen)));
        e.image_path = abs_path.lexically_proximate(abs_manifest_dir).generic_string();
        e.class_index = cls;
        e.prompt = gen.prompt;
        e.seed = gen.seed;
        e.service_id = gen.service_id;
        e.sha256 = sha256_hex(std::span<const uint8_t>(bytes.data(), bytes.size()));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  const int workers = std::max(1, std::min(req.workers, total));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int i = 0; i < workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  SyntheticManifest m;
  m.target_shape = req.target_shape;
  m.entries = std::move(entries);
  m.created_at = iso8601_utc_now();
  return m;
}

}  // namespace shadowforge
