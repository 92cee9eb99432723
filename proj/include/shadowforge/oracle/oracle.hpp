#pragma once

#include <string>
#include <vector>

#include "shadowforge/nn/network.hpp"
#include "shadowforge/oracle/ledger.hpp"

namespace shadowforge {

/// The only doorway to the target model. Every prediction debits a ledger
/// before it runs; implementations expose labels (and optionally
/// probabilities) but never gradients or parameters.
class BlackBoxOracle {
 public:
  virtual ~BlackBoxOracle() = default;

  virtual TensorShape input_shape() const = 0;
  virtual int num_classes() const = 0;

  std::vector<int> query_hard(const ImageBatch<float>& batch, QueryLedger& ledger,
                              const std::string& purpose);
  MatX<float> query_soft(const ImageBatch<float>& batch, QueryLedger& ledger,
                         const std::string& purpose);

 protected:
  virtual std::vector<int> predict_hard(const ImageBatch<float>& batch) = 0;
  virtual MatX<float> predict_soft(const ImageBatch<float>& batch) = 0;
};

/// Wraps an owned copy of a trained classifier.
class InProcessOracle final : public BlackBoxOracle {
 public:
  explicit InProcessOracle(Network<float> net) : net_(std::move(net)) {}

  TensorShape input_shape() const override { return net_.input_shape(); }
  int num_classes() const override { return net_.num_classes(); }

 protected:
  std::vector<int> predict_hard(const ImageBatch<float>& batch) override;
  MatX<float> predict_soft(const ImageBatch<float>& batch) override;

 private:
  Network<float> net_;
};

}  // namespace shadowforge
