#include "shadowforge/train/ops.hpp"

namespace shadowforge {

TrainedClassifier train_target(const ClassifierSpec& spec, const LabeledSetF& dataset,
                               const TrainSchedule& sched) {
  if (dataset.size() < 1) throw InvalidInput("train_target: empty dataset");
  TrainedClassifier out{build_classifier<float>(spec), {}};
  out.history = fit_hard(out.net, dataset.images, dataset.labels, sched);
  return out;
}

History pretrain(Network<float>& substitute, const LabeledSetF& synthetic,
                 const TrainSchedule& sched) {
  if (synthetic.size() < 1) throw InvalidInput("pretrain: empty synthetic set");
  if (synthetic.num_classes != substitute.num_classes())
    throw InvalidInput("pretrain: dataset has " + std::to_string(synthetic.num_classes) +
                       " classes, substitute expects " +
                       std::to_string(substitute.num_classes()));
  return fit_hard(substitute, synthetic.images, synthetic.labels, sched);
}

QueriedPairSet collect_query_set(const LabeledSetF& pool, int q, uint64_t seed,
                                 BlackBoxOracle& oracle, QueryLedger& ledger,
                                 const std::vector<double>& scores) {
  auto idx = stratified_select_indices(pool.labels, pool.num_classes, q, seed, scores);
  QueriedPairSet pairs;
  pairs.images = pool.images.rows(idx);
  pairs.per_class_counts.assign(pool.num_classes, 0);
  for (int i : idx) pairs.per_class_counts[pool.labels[i]] += 1;
  pairs.labels = oracle.query_hard(pairs.images, ledger, kDistillPurpose);
  return pairs;
}

std::vector<double> confidence_scores(const Network<float>& net,
                                      const ImageBatch<float>& images) {
  if (images.size() < 1) throw InvalidInput("confidence_scores: empty image set");
  const MatX<float> probs = softmax(net.logits(images));
  std::vector<double> scores(static_cast<size_t>(probs.rows()));
  for (Eigen::Index i = 0; i < probs.rows(); ++i)
    scores[static_cast<size_t>(i)] = static_cast<double>(probs.row(i).maxCoeff());
  return scores;
}

History distill(Network<float>& substitute, const QueriedPairSet& pairs,
                const TrainSchedule& sched) {
  if (pairs.size() < 1) throw InvalidInput("distill: empty pair set");
  if (sched.label_smoothing > 0) {
    // Smooth the one-hot responses toward uniform so a handful of unreliable
    // answers in a small query set cannot dominate the fine-tune.
    const int k = substitute.num_classes();
    const auto a = static_cast<float>(sched.label_smoothing);
    MatX<float> targets =
        MatX<float>::Constant(pairs.labels.size(), k, a / static_cast<float>(k));
    for (Eigen::Index i = 0; i < pairs.labels.size(); ++i) {
      const int y = pairs.labels[i];
      if (y < 0 || y >= k) throw InvalidInput("distill: label out of range");
      targets(i, y) += 1.0f - a;
    }
    return fit_soft(substitute, pairs.images, targets, sched);
  }
  return fit_hard(substitute, pairs.images, pairs.labels, sched);
}

History distill_soft(Network<float>& substitute, const ImageBatch<float>& images,
                     const MatX<float>& teacher_probs, const TrainSchedule& sched) {
  if (images.size() < 1) throw InvalidInput("distill_soft: empty image set");
  return fit_soft(substitute, images, teacher_probs, sched);
}

}  // namespace shadowforge
