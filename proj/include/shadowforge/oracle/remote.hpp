#pragma once

#include <memory>
#include <string>

#include "shadowforge/oracle/oracle.hpp"

namespace shadowforge {

/// Client for the prediction service: the attack pipeline's view of a
/// pay-per-query API across a process boundary.
class RemoteOracle final : public BlackBoxOracle {
 public:
  RemoteOracle(std::string base_url, std::string api_key, TensorShape input_shape,
               int num_classes);
  ~RemoteOracle() override;

  TensorShape input_shape() const override { return shape_; }
  int num_classes() const override { return classes_; }

 protected:
  std::vector<int> predict_hard(const ImageBatch<float>& batch) override;
  MatX<float> predict_soft(const ImageBatch<float>& batch) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  TensorShape shape_;
  int classes_;
};

}  // namespace shadowforge
