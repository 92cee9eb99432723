#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "shadowforge/core/types.hpp"

namespace shadowforge {

/// One image request to a text-to-image source. The generative knobs beyond
/// (prompt, seed, steps, resolution) live inside the external service.
struct GenerationRequest {
  std::string prompt;
  int class_index = 0;
  uint64_t seed = 0;
  int inference_steps = 50;
  int native_resolution = 512;
  std::string service_id = "stub";  // "stub" | "remote"

  void validate() const {
    if (prompt.empty()) throw InvalidInput("GenerationRequest: empty prompt");
    if (class_index < 0) throw InvalidInput("GenerationRequest: negative class index");
    if (inference_steps < 1)
      throw InvalidInput("GenerationRequest: inference_steps must be >= 1");
    if (native_resolution < 1)
      throw InvalidInput("GenerationRequest: native_resolution must be >= 1");
  }
};

/// Produces PNG bytes for a request. Call counting lives in the base class so
/// cache-hit tests can assert "zero backend calls" against any implementation.
class TextToImageBackend {
 public:
  virtual ~TextToImageBackend() = default;

  std::vector<uint8_t> generate_png(const GenerationRequest& req) {
    req.validate();
    calls_.fetch_add(1, std::memory_order_relaxed);
    return do_generate(req);
  }

  virtual std::string id() const = 0;
  int64_t calls() const { return calls_.load(std::memory_order_relaxed); }

 protected:
  virtual std::vector<uint8_t> do_generate(const GenerationRequest& req) = 0;

 private:
  std::atomic<int64_t> calls_{0};
};

/// Offline deterministic backend: class-conditional procedural images.
class StubBackend : public TextToImageBackend {
 public:
  explicit StubBackend(int channels = 3) : channels_(channels) {
    if (channels != 1 && channels != 3)
      throw InvalidInput("StubBackend: channels must be 1 or 3");
  }
  std::string id() const override { return "stub"; }

 protected:
  std::vector<uint8_t> do_generate(const GenerationRequest& req) override;

 private:
  int channels_;
};

using SleepFn = std::function<void(std::chrono::milliseconds)>;

/// HTTP client for an external text-to-image service.
/// POST <base_url>/txt2img {prompt,seed,steps,width,height} -> {image_b64}.
/// Transport failures and 5xx responses are retried (1s/2s/4s backoff) before
/// giving up with an error naming the request.
class RemoteBackend : public TextToImageBackend {
 public:
  RemoteBackend(std::string base_url, std::string token, SleepFn sleeper = {});
  ~RemoteBackend() override;

  std::string id() const override { return "remote"; }

  /// Reads SHADOWFORGE_T2I_URL / SHADOWFORGE_T2I_TOKEN.
  static std::unique_ptr<RemoteBackend> from_env();

 protected:
  std::vector<uint8_t> do_generate(const GenerationRequest& req) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace shadowforge
