#pragma once

#include <string>
#include <vector>

#include "shadowforge/eval/metrics.hpp"
#include "shadowforge/train/ops.hpp"

namespace shadowforge {

/// Shared inputs for a query-budget sweep. Every cycle forks the same
/// pretrained substitute so budgets are compared from an identical start.
struct SweepContext {
  const Network<float>* pretrained = nullptr;
  BlackBoxOracle* target = nullptr;
  const LabeledSetF* pool = nullptr;      // query pool (labels = pool classes, used for stratification)
  const LabeledSetF* test_set = nullptr;  // held-out evaluation data
  TrainSchedule distill_schedule;
  std::string dataset_id;
  std::string target_arch;
  std::string substitute_arch;
};

/// Runs one extraction cycle per budget: fork pretrained substitute, spend the
/// budget on one hard-label query round (budget 0 skips querying entirely),
/// fine-tune, and score accuracy/agreement on the test set. Budgets must be
/// non-negative and strictly increasing. Throws BudgetExhausted with the
/// ledger snapshot appended if a cycle overruns its budget.
std::vector<ExtractionReport> budget_sweep(const SweepContext& ctx,
                                           const std::vector<int>& budgets,
                                           std::uint64_t seed);

}  // namespace shadowforge
