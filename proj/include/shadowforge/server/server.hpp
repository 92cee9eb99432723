#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "shadowforge/nn/network.hpp"

namespace shadowforge {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks an ephemeral port
  std::filesystem::path checkpoint_path;
  std::string mode = "hard";  // "hard" | "soft"
  int64_t per_key_budget = -1;  // negative = unlimited
  std::vector<std::string> api_keys;  // empty = open access

  void validate() const;
};

/// Pay-per-query prediction service over a trained classifier:
/// POST /v1/predict, GET /v1/stats, GET /healthz. Optional static API keys
/// (X-Api-Key) and per-key budgets (429 {"error":"budget_exhausted"}, nothing
/// debited). Inference is read-only, counters are atomic.
class MlaasServer {
 public:
  /// Loads the model from config.checkpoint_path.
  explicit MlaasServer(ServerConfig config);
  /// Serves an already-loaded model (tests, in-process pipelines).
  MlaasServer(ServerConfig config, Network<float> net);
  ~MlaasServer();

  MlaasServer(const MlaasServer&) = delete;
  MlaasServer& operator=(const MlaasServer&) = delete;

  /// Binds and starts serving on a background thread; returns the bound port.
  int start();
  void stop();
  bool running() const;

  /// Total images predicted (successful requests only).
  int64_t queries_served() const;
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace shadowforge
