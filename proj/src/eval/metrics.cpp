#include "shadowforge/eval/metrics.hpp"

#include "shadowforge/core/errors.hpp"
#include "shadowforge/nn/loss.hpp"

namespace shadowforge {

double label_match_rate(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size())
    throw InvalidInput("label_match_rate: length mismatch (" +
                       std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  if (a.empty()) throw InvalidInput("label_match_rate: empty label sequences");
  int hits = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] == b[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(a.size());
}

double oracle_accuracy(BlackBoxOracle& oracle, const LabeledSetF& set,
                       QueryLedger& eval_ledger) {
  const std::vector<int> pred = oracle.query_hard(set.images, eval_ledger, kEvalPurpose);
  return label_match_rate(pred, set.labels);
}

double model_accuracy(const Network<float>& net, const LabeledSetF& set) {
  const std::vector<int> pred = net.predict(set.images);
  return label_match_rate(pred, set.labels);
}

double agreement(const Network<float>& substitute, BlackBoxOracle& target,
                 const ImageBatch<float>& images, QueryLedger& eval_ledger) {
  const std::vector<int> sub_pred = substitute.predict(images);
  const std::vector<int> tgt_pred = target.query_hard(images, eval_ledger, kEvalPurpose);
  return label_match_rate(sub_pred, tgt_pred);
}

AsrReport asr_from_labels(const std::vector<int>& true_labels,
                          const std::vector<int>& target_clean_labels,
                          const std::vector<int>& target_adv_labels, bool targeted,
                          const std::vector<int>& attack_labels,
                          const std::string& method, double epsilon, double alpha,
                          int steps) {
  const std::size_t n = true_labels.size();
  if (target_clean_labels.size() != n || target_adv_labels.size() != n)
    throw InvalidInput("asr_from_labels: label array length mismatch");
  if (targeted && attack_labels.size() != n)
    throw InvalidInput("asr_from_labels: targeted scoring requires attack labels");

  AsrReport rep;
  rep.method = method;
  rep.targeted = targeted;
  rep.epsilon = epsilon;
  rep.alpha = alpha;
  rep.steps = steps;
  for (std::size_t i = 0; i < n; ++i) {
    if (targeted) {
      if (true_labels[i] == attack_labels[i]) continue;  // already the requested class
      ++rep.n_eligible;
      if (target_adv_labels[i] == attack_labels[i]) ++rep.n_success;
    } else {
      if (target_clean_labels[i] != true_labels[i]) continue;  // already misclassified
      ++rep.n_eligible;
      if (target_adv_labels[i] != true_labels[i]) ++rep.n_success;
    }
  }
  if (rep.n_eligible == 0)
    throw DegenerateReport("attack success rate undefined: no eligible examples (" +
                           method + std::string(targeted ? ", targeted" : ", untargeted") +
                           ")");
  rep.asr = static_cast<double>(rep.n_success) / static_cast<double>(rep.n_eligible);
  return rep;
}

AsrReport compute_asr(BlackBoxOracle& target, QueryLedger& eval_ledger,
                      const ImageBatch<float>& clean,
                      const std::vector<int>& true_labels,
                      const ImageBatch<float>& adv, const AttackSpec& spec,
                      const std::vector<int>& attack_labels) {
  if (clean.size() != adv.size())
    throw InvalidInput("compute_asr: clean/adversarial batch size mismatch");
  const std::vector<int> clean_pred = target.query_hard(clean, eval_ledger, kEvalPurpose);
  const std::vector<int> adv_pred = target.query_hard(adv, eval_ledger, kEvalPurpose);
  return asr_from_labels(true_labels, clean_pred, adv_pred, spec.targeted, attack_labels,
                         attack_method_name(spec.method), spec.epsilon,
                         spec.effective_alpha(), spec.effective_steps());
}

}  // namespace shadowforge
