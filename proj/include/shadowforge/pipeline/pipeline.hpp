#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "shadowforge/config/config.hpp"
#include "shadowforge/data/dataset.hpp"
#include "shadowforge/eval/metrics.hpp"
#include "shadowforge/oracle/oracle.hpp"

namespace shadowforge {

/// Artifact layout inside one run directory.
struct RunPaths {
  std::filesystem::path root;

  std::filesystem::path config_json() const { return root / "config.json"; }
  std::filesystem::path manifest_json() const { return root / "manifest.json"; }
  std::filesystem::path target_checkpoint() const { return root / "target.ckpt"; }
  std::filesystem::path target_history() const { return root / "target_history.csv"; }
  std::filesystem::path pretrain_checkpoint() const {
    return root / "substitute_pretrained.ckpt";
  }
  std::filesystem::path pretrain_history() const { return root / "pretrain_history.csv"; }
  std::filesystem::path distill_checkpoint() const {
    return root / "substitute_distilled.ckpt";
  }
  std::filesystem::path distill_history() const { return root / "distill_history.csv"; }
  std::filesystem::path ledger_json() const { return root / "ledger.json"; }
  std::filesystem::path zero_query_marker() const { return root / "zero-query"; }
  std::filesystem::path adv_dir() const { return root / "adv"; }
  std::filesystem::path predictions_json() const { return root / "predictions.json"; }
  std::filesystem::path reports_dir() const { return root / "reports"; }
  std::filesystem::path marker(const std::string& stage) const {
    return root / (".done-" + stage);
  }
};

/// Stage-by-stage experiment driver. Each stage writes its artifacts plus a
/// .done-<stage> marker; with resume=true, stages whose marker exists are
/// skipped. Every random draw is derived from cfg.seed, so a rerun from the
/// stored resolved config reproduces all reports byte for byte.
class Pipeline {
 public:
  Pipeline(ExperimentConfig cfg, bool resume);

  const RunPaths& paths() const { return paths_; }
  const ExperimentConfig& config() const { return cfg_; }

  void gen();
  void train_target();
  void pretrain();
  void distill();
  void attack();
  void evaluate();
  void report();
  void sweep();

  /// gen → train-target → pretrain → distill → attack → eval → report.
  void run_all();

  /// The labeled dataset splits (procedural or manifest-backed), memoized.
  const LabeledSetF& train_set();
  const LabeledSetF& test_set();
  /// Synthetic pool labeled by prompt class, loaded from this run's manifest.
  const LabeledSetF& synthetic_set();

  /// In-process oracle over the trained target, or a remote client when the
  /// config names a server URL.
  BlackBoxOracle& target_oracle();

 private:
  bool stage_done(const std::string& stage) const;
  void mark_done(const std::string& stage);
  void require_artifact(const std::filesystem::path& p, const std::string& hint) const;
  std::filesystem::path cache_dir() const;

  ExperimentConfig cfg_;
  RunPaths paths_;
  bool resume_ = false;
  std::optional<LabeledSetF> train_;
  std::optional<LabeledSetF> test_;
  std::optional<LabeledSetF> synthetic_;
  std::unique_ptr<BlackBoxOracle> oracle_;
};

}  // namespace shadowforge
