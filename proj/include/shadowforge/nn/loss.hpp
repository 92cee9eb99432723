#pragma once

#include <cmath>
#include <vector>

#include "shadowforge/core/types.hpp"

namespace shadowforge {

enum class Reduction { Mean, Sum };

template <typename T>
MatX<T> log_softmax(const MatX<T>& logits) {
  MatX<T> out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const T mx = logits.row(i).maxCoeff();
    Eigen::Array<T, 1, Eigen::Dynamic> shifted = logits.row(i).array() - mx;
    const T lse = std::log(shifted.exp().sum());
    out.row(i) = (shifted - lse).matrix();
  }
  return out;
}

template <typename T>
MatX<T> softmax(const MatX<T>& logits) {
  return log_softmax(logits).array().exp().matrix();
}

template <typename T>
std::vector<int> argmax_rows(const MatX<T>& m) {
  std::vector<int> out(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Eigen::Index j;
    m.row(i).maxCoeff(&j);
    out[i] = static_cast<int>(j);
  }
  return out;
}

template <typename T>
void check_labels(const std::vector<int>& labels, Eigen::Index n, Eigen::Index k) {
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw InvalidInput("labels: expected " + std::to_string(n) + " entries, got " +
                       std::to_string(labels.size()));
  for (int y : labels)
    if (y < 0 || y >= k)
      throw InvalidInput("labels: class " + std::to_string(y) + " out of range [0," +
                         std::to_string(k) + ")");
}

template <typename T>
T cross_entropy(const MatX<T>& logits, const std::vector<int>& labels, Reduction r) {
  check_labels<T>(labels, logits.rows(), logits.cols());
  MatX<T> ls = log_softmax(logits);
  T total = 0;
  for (Eigen::Index i = 0; i < ls.rows(); ++i) total -= ls(i, labels[i]);
  return r == Reduction::Mean ? total / static_cast<T>(ls.rows()) : total;
}

/// d(CE)/d(logits) = softmax - onehot, scaled by 1/N under Mean.
template <typename T>
MatX<T> cross_entropy_grad(const MatX<T>& logits, const std::vector<int>& labels,
                           Reduction r) {
  check_labels<T>(labels, logits.rows(), logits.cols());
  MatX<T> g = softmax(logits);
  for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, labels[i]) -= T(1);
  if (r == Reduction::Mean) g /= static_cast<T>(g.rows());
  return g;
}

template <typename T>
void check_prob_rows(const MatX<T>& probs, double tol = 1e-6) {
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    if (probs.row(i).minCoeff() < T(0))
      throw InvalidInput("probabilities: negative entry in row " + std::to_string(i));
    if (std::abs(static_cast<double>(probs.row(i).sum()) - 1.0) > tol)
      throw InvalidInput("probabilities: row " + std::to_string(i) +
                         " does not sum to 1");
  }
}

/// KL(target ‖ softmax(logits)) at temperature 1; rows of `target` are
/// probability vectors. 0·log 0 counts as 0.
template <typename T>
T kl_divergence(const MatX<T>& target, const MatX<T>& logits, Reduction r) {
  if (target.rows() != logits.rows() || target.cols() != logits.cols())
    throw InvalidInput("kl_divergence: shape mismatch");
  MatX<T> ls = log_softmax(logits);
  T total = 0;
  for (Eigen::Index i = 0; i < target.rows(); ++i)
    for (Eigen::Index j = 0; j < target.cols(); ++j) {
      const T t = target(i, j);
      if (t > T(0)) total += t * (std::log(t) - ls(i, j));
    }
  return r == Reduction::Mean ? total / static_cast<T>(target.rows()) : total;
}

/// d(KL)/d(logits) = softmax - target (same as soft cross-entropy).
template <typename T>
MatX<T> kl_grad(const MatX<T>& target, const MatX<T>& logits, Reduction r) {
  if (target.rows() != logits.rows() || target.cols() != logits.cols())
    throw InvalidInput("kl_grad: shape mismatch");
  MatX<T> g = softmax(logits) - target;
  if (r == Reduction::Mean) g /= static_cast<T>(g.rows());
  return g;
}

}  // namespace shadowforge
