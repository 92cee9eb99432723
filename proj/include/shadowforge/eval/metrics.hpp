#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "shadowforge/attacks/attacks.hpp"
#include "shadowforge/data/dataset.hpp"
#include "shadowforge/oracle/oracle.hpp"

namespace shadowforge {

inline constexpr const char* kEvalPurpose = "evaluation";

/// Fraction of exact matches between two label sequences.
double label_match_rate(const std::vector<int>& a, const std::vector<int>& b);

/// Top-1 accuracy of a black-box oracle on ground truth (debits eval ledger).
double oracle_accuracy(BlackBoxOracle& oracle, const LabeledSetF& set,
                       QueryLedger& eval_ledger);

/// Top-1 accuracy of a local model on ground truth.
double model_accuracy(const Network<float>& net, const LabeledSetF& set);

/// Fraction of images where substitute and target emit the same label.
double agreement(const Network<float>& substitute, BlackBoxOracle& target,
                 const ImageBatch<float>& images, QueryLedger& eval_ledger);

struct AsrReport {
  std::string method;
  bool targeted = false;
  double epsilon = 0.0;
  double alpha = 0.0;
  int steps = 0;
  int n_eligible = 0;
  int n_success = 0;
  double asr = 0.0;
};

/// Pure ASR computation over stored label arrays.
/// Untargeted: eligible = target correct on clean; success = adv label differs
/// from truth. Targeted: eligible = truth != target class; success = adv label
/// equals target class.
AsrReport asr_from_labels(const std::vector<int>& true_labels,
                          const std::vector<int>& target_clean_labels,
                          const std::vector<int>& target_adv_labels, bool targeted,
                          const std::vector<int>& attack_labels,
                          const std::string& method, double epsilon, double alpha,
                          int steps);

/// Query the target on clean and adversarial batches, then score.
AsrReport compute_asr(BlackBoxOracle& target, QueryLedger& eval_ledger,
                      const ImageBatch<float>& clean,
                      const std::vector<int>& true_labels,
                      const ImageBatch<float>& adv, const AttackSpec& spec,
                      const std::vector<int>& attack_labels);

struct ExtractionReport {
  std::string dataset_id;
  std::string target_arch;
  std::string substitute_arch;
  int64_t budget = 0;
  int64_t queries_used = 0;
  int64_t eval_queries = 0;
  double target_test_accuracy = 0.0;
  double substitute_test_accuracy = 0.0;
  double agreement_rate = 0.0;
  uint64_t seed = 0;
  nlohmann::json ledger_snapshot;  // query ledger state after the cycle
};

}  // namespace shadowforge
