#pragma once

#include "shadowforge/data/dataset.hpp"
#include "shadowforge/oracle/oracle.hpp"
#include "shadowforge/train/stratified.hpp"
#include "shadowforge/train/trainer.hpp"
#include "shadowforge/zoo/registry.hpp"

namespace shadowforge {

/// Purpose tag carried by every budgeted target query.
inline constexpr const char* kDistillPurpose = "distillation-labels";

/// Query images plus the target's hard labels for them; per_class_counts is
/// indexed by selection-time (prompt) class.
struct QueriedPairSet {
  ImageBatch<float> images;
  std::vector<int> labels;
  std::vector<int> per_class_counts;

  int size() const { return images.size(); }
};

struct TrainedClassifier {
  Network<float> net;
  History history;
};

/// Train a fresh classifier on a labeled dataset.
TrainedClassifier train_target(const ClassifierSpec& spec, const LabeledSetF& dataset,
                               const TrainSchedule& sched);

/// Fit the substitute on synthetic data labeled by prompt class. Touches no
/// oracle.
History pretrain(Network<float>& substitute, const LabeledSetF& synthetic,
                 const TrainSchedule& sched);

/// Stratified-select q pool images and spend the budget in one hard-label
/// round. Optional per-image scores switch the within-class policy to the
/// coverage stream (see stratified_select_indices).
QueriedPairSet collect_query_set(const LabeledSetF& pool, int q, uint64_t seed,
                                 BlackBoxOracle& oracle, QueryLedger& ledger,
                                 const std::vector<double>& scores = {});

/// Max softmax probability per image under `net` — a model-confidence score
/// for coverage-guided selection. Uses no oracle queries.
std::vector<double> confidence_scores(const Network<float>& net,
                                      const ImageBatch<float>& images);

/// Fine-tune on oracle labels; no queries happen here.
History distill(Network<float>& substitute, const QueriedPairSet& pairs,
                const TrainSchedule& sched);

/// Soft-label variant: KL(teacher ‖ substitute) at temperature 1.
History distill_soft(Network<float>& substitute, const ImageBatch<float>& images,
                     const MatX<float>& teacher_probs, const TrainSchedule& sched);

}  // namespace shadowforge
