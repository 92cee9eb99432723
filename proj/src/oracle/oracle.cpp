#include "shadowforge/oracle/oracle.hpp"

namespace shadowforge {

namespace {

void check_batch(const ImageBatch<float>& batch, const TensorShape& expected) {
  if (!(batch.shape == expected))
    throw InvalidInput("oracle query: batch shape " + batch.shape.str() +
                       " does not match oracle input " + expected.str());
  if (batch.size() < 1) throw InvalidInput("oracle query: empty batch");
}

constexpr int kChunk = 256;

}  // namespace

std::vector<int> BlackBoxOracle::query_hard(const ImageBatch<float>& batch,
                                            QueryLedger& ledger,
                                            const std::string& purpose) {
  check_batch(batch, input_shape());
  ledger.debit(batch.size(), purpose);
  return predict_hard(batch);
}

MatX<float> BlackBoxOracle::query_soft(const ImageBatch<float>& batch,
                                       QueryLedger& ledger, const std::string& purpose) {
  check_batch(batch, input_shape());
  ledger.debit(batch.size(), purpose);
  return predict_soft(batch);
}

std::vector<int> InProcessOracle::predict_hard(const ImageBatch<float>& batch) {
  std::vector<int> labels;
  labels.reserve(batch.size());
  for (int start = 0; start < batch.size(); start += kChunk) {
    const int n = std::min(kChunk, batch.size() - start);
    auto part = argmax_rows<float>(net_.logits(MatX<float>(batch.data.middleRows(start, n))));
    labels.insert(labels.end(), part.begin(), part.end());
  }
  return labels;
}

MatX<float> InProcessOracle::predict_soft(const ImageBatch<float>& batch) {
  MatX<float> probs(batch.size(), net_.num_classes());
  for (int start = 0; start < batch.size(); start += kChunk) {
    const int n = std::min(kChunk, batch.size() - start);
    probs.middleRows(start, n) =
        softmax<float>(net_.logits(MatX<float>(batch.data.middleRows(start, n))));
  }
  return probs;
}

}  // namespace shadowforge
