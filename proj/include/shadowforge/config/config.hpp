#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "shadowforge/attacks/attacks.hpp"
#include "shadowforge/core/types.hpp"
#include "shadowforge/synth/patterns.hpp"
#include "shadowforge/train/schedule.hpp"

namespace shadowforge {

/// Where the labeled "real" data comes from: a procedurally generated pattern
/// dataset (self-contained harness) or a pair of image manifests on disk.
struct DatasetConfig {
  std::string kind = "procedural";  // "procedural" | "manifest"
  std::string id = "procedural-4";
  int num_classes = 4;
  TensorShape shape{3, 16, 16};
  int train_per_class = 500;
  int test_per_class = 250;
  PatternParams pattern;               // procedural kind only
  std::string train_manifest;          // manifest kind only
  std::string test_manifest;
};

struct SyntheticConfig {
  std::string backend = "stub";  // "stub" | "remote" (remote reads SHADOWFORGE_T2I_URL/TOKEN)
  int per_class = 1000;
  int inference_steps = 50;
  int native_resolution = 32;
  int workers = 1;
  std::string cache_dir;  // empty → <output_dir>/cache
};

struct TargetConfig {
  std::string arch = "convnet-s";
  TrainSchedule schedule;   // seed is always derived from the run seed
  std::string checkpoint;   // nonempty → use this checkpoint instead of training
  std::string server_url;   // nonempty → query a remote prediction server
  std::string api_key;
  std::string serve_mode = "hard";  // label mode when this run's model is served
  std::int64_t serve_budget = -1;   // per-key budget when served; -1 = unlimited
};

struct SubstituteConfig {
  std::string arch = "convnet-s";
  TrainSchedule pretrain;
  TrainSchedule distill;
};

struct EvalConfig {
  int attack_sample_count = 256;  // held-out images drawn for the attack stage
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string run_id = "run";
  std::uint64_t seed = 1;
  std::string output_dir = "runs/run";
  std::int64_t budget = 400;
  DatasetConfig dataset;
  SyntheticConfig synthetic;
  TargetConfig target;
  SubstituteConfig substitute;
  std::vector<AttackSpec> attacks;
  EvalConfig eval;
  std::vector<int> sweep_budgets{0, 100, 200, 400};
  std::vector<std::uint64_t> sweep_seeds{1, 2, 3, 4, 5};
};

/// Strict parse: every key must be known, every value well-typed, invariants
/// checked. Violations raise ConfigError naming the offending dotted key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Canonical serialization; parse_config(config_to_json(c)) reproduces c and
/// the dump is byte-stable (alphabetical keys).
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Applies a `--set key=value` override onto raw config JSON. Dotted segments
/// traverse objects (created on demand) and numeric segments index arrays.
/// The value string is parsed as JSON when possible, else kept as a string.
void apply_override(nlohmann::json& j, const std::string& dotted_key,
                    const std::string& value);

/// Splits "key=value" (first '='); malformed input raises ConfigError.
std::pair<std::string, std::string> split_override(const std::string& kv);

}  // namespace shadowforge
