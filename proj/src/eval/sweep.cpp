#include "shadowforge/eval/sweep.hpp"

#include "shadowforge/core/errors.hpp"
#include "shadowforge/core/rng.hpp"

namespace shadowforge {

std::vector<ExtractionReport> budget_sweep(const SweepContext& ctx,
                                           const std::vector<int>& budgets,
                                           std::uint64_t seed) {
  if (!ctx.pretrained || !ctx.target || !ctx.pool || !ctx.test_set)
    throw InvalidInput("budget_sweep: context is missing a required input");
  if (budgets.empty()) throw InvalidInput("budget_sweep: no budgets given");
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (budgets[i] < 0)
      throw InvalidInput("budget_sweep: negative budget " + std::to_string(budgets[i]));
    if (i > 0 && budgets[i] <= budgets[i - 1])
      throw InvalidInput("budget_sweep: budgets must be strictly increasing");
  }

  std::vector<ExtractionReport> reports;
  reports.reserve(budgets.size());
  // One query stream per sweep seed: every budget level replays the same
  // stratified selection order and truncates it, the way a single campaign
  // would be cut off at different budgets. Nested query sets make adjacent
  // budget levels directly comparable instead of independent re-draws.
  const std::uint64_t selection_seed = derive_seed(seed, "sweep-queries");
  for (const int q : budgets) {
    Network<float> substitute = *ctx.pretrained;
    QueryLedger ledger(q);
    try {
      if (q > 0) {
        QueriedPairSet pairs =
            collect_query_set(*ctx.pool, q, selection_seed, *ctx.target, ledger);
        TrainSchedule sched = ctx.distill_schedule;
        sched.seed = derive_seed(derive_seed(seed, "sweep-distill"),
                                 static_cast<std::uint64_t>(q));
        distill(substitute, pairs, sched);
      }
    } catch (const BudgetExhausted& e) {
      throw BudgetExhausted(std::string(e.what()) + "\nledger: " +
                            ledger.snapshot().dump());
    }

    QueryLedger eval_ledger = QueryLedger::unlimited();
    ExtractionReport rep;
    rep.dataset_id = ctx.dataset_id;
    rep.target_arch = ctx.target_arch;
    rep.substitute_arch = ctx.substitute_arch;
    rep.budget = q;
    rep.queries_used = ledger.used();
    rep.seed = seed;
    rep.target_test_accuracy = oracle_accuracy(*ctx.target, *ctx.test_set, eval_ledger);
    rep.substitute_test_accuracy = model_accuracy(substitute, *ctx.test_set);
    rep.agreement_rate = agreement(substitute, *ctx.target, ctx.test_set->images, eval_ledger);
    rep.eval_queries = eval_ledger.used();
    rep.ledger_snapshot = ledger.snapshot();
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace shadowforge
