#pragma once

#include <memory>
#include <string>
#include <vector>

#include "shadowforge/nn/layers.hpp"
#include "shadowforge/nn/loss.hpp"

namespace shadowforge {

/// Sequential classifier: images in, logits out. Copyable (deep-clones
/// layers), so substitutes can be forked from one pretrained state.
template <typename T>
class Network {
 public:
  Network() = default;
  Network(TensorShape input, int num_classes)
      : input_(input), classes_(num_classes), cur_(input) {
    if (num_classes < 2) throw InvalidInput("Network: need at least 2 classes");
    if (input.elems() < 1) throw InvalidInput("Network: empty input shape");
  }

  Network(const Network& o) { *this = o; }
  Network& operator=(const Network& o) {
    if (this == &o) return *this;
    input_ = o.input_;
    classes_ = o.classes_;
    cur_ = o.cur_;
    layers_.clear();
    layers_.reserve(o.layers_.size());
    for (const auto& l : o.layers_) layers_.push_back(l->clone());
    rebuild_grads();
    return *this;
  }
  Network(Network&&) noexcept = default;
  Network& operator=(Network&&) noexcept = default;

  void add(std::unique_ptr<Layer<T>> layer) {
    cur_ = layer->bind(cur_);
    layers_.push_back(std::move(layer));
    grads_.emplace_back(layers_.back()->num_param_tensors());
  }

  /// Seeded deterministic initialization, layer order fixed.
  void init(uint64_t seed) {
    Rng rng(derive_seed(seed, "net-init"));
    for (auto& l : layers_) l->init(rng);
  }

  MatX<T> forward(const MatX<T>& x, Mode mode, std::vector<LayerCache<T>>* tape) const {
    if (x.cols() != input_.elems())
      throw InvalidInput("Network::forward: input has " + std::to_string(x.cols()) +
                         " features, expected " + std::to_string(input_.elems()));
    if (tape) tape->resize(layers_.size());
    MatX<T> cur = x;
    for (size_t i = 0; i < layers_.size(); ++i) {
      MatX<T> next;
      layers_[i]->forward(cur, next, tape ? &(*tape)[i] : nullptr, mode);
      cur = std::move(next);
    }
    return cur;
  }

  MatX<T> logits(const MatX<T>& x) const { return forward(x, Mode::Eval, nullptr); }
  MatX<T> logits(const ImageBatch<T>& b) const { return logits(b.data); }

  std::vector<int> predict(const MatX<T>& x) const { return argmax_rows(logits(x)); }
  std::vector<int> predict(const ImageBatch<T>& b) const { return predict(b.data); }

  /// Backpropagate d(loss)/d(logits). Fills this network's grad tensors when
  /// want_param_grads; returns d(loss)/d(input) when want_input_grad (empty
  /// matrix otherwise).
  MatX<T> backward(const MatX<T>& dlogits, const std::vector<LayerCache<T>>& tape,
                   bool want_param_grads, bool want_input_grad) {
    if (tape.size() != layers_.size())
      throw InvalidInput("Network::backward: tape does not match layer count");
    MatX<T> dcur = dlogits;
    for (int i = static_cast<int>(layers_.size()) - 1; i >= 0; --i) {
      const bool need_din = want_input_grad || i > 0;
      MatX<T> din;
      layers_[i]->backward(dcur, tape[i], din,
                           want_param_grads ? grads_[i].data() : nullptr, need_din);
      dcur = std::move(din);
    }
    return dcur;
  }

  std::vector<MatX<T>*> param_tensors() {
    std::vector<MatX<T>*> out;
    for (auto& l : layers_) l->collect_params(out);
    return out;
  }
  std::vector<const MatX<T>*> param_tensors() const {
    std::vector<const MatX<T>*> out;
    for (const auto& l : layers_) l->collect_params(out);
    return out;
  }
  std::vector<MatX<T>*> state_tensors() {
    std::vector<MatX<T>*> out;
    for (auto& l : layers_) l->collect_state(out);
    return out;
  }
  std::vector<const MatX<T>*> state_tensors() const {
    std::vector<const MatX<T>*> out;
    for (const auto& l : layers_) l->collect_state(out);
    return out;
  }

  /// Gradient tensors flattened in param_tensors() order.
  std::vector<MatX<T>*> grad_tensors() {
    std::vector<MatX<T>*> out;
    for (auto& g : grads_)
      for (auto& m : g) out.push_back(&m);
    return out;
  }

  int64_t num_parameters() const {
    int64_t n = 0;
    for (const auto* p : param_tensors()) n += p->size();
    return n;
  }

  /// Freeze/unfreeze running statistics across all layers (fine-tuning mode).
  void set_stats_frozen(bool frozen) {
    for (auto& l : layers_) l->set_stats_frozen(frozen);
  }

  const TensorShape& input_shape() const { return input_; }
  int num_classes() const { return classes_; }
  const TensorShape& output_shape() const { return cur_; }
  size_t num_layers() const { return layers_.size(); }

 private:
  void rebuild_grads() {
    grads_.clear();
    for (const auto& l : layers_) grads_.emplace_back(l->num_param_tensors());
  }

  TensorShape input_{};
  int classes_ = 0;
  TensorShape cur_{};
  std::vector<std::unique_ptr<Layer<T>>> layers_;
  std::vector<std::vector<MatX<T>>> grads_;
};

/// Loss for input-gradient computation: cross-entropy toward given labels, or
/// a constant (detached) loss whose gradient is identically zero.
struct LossSpec {
  enum class Kind { CrossEntropy, Constant };
  Kind kind = Kind::CrossEntropy;
  std::vector<int> labels;
};

/// d(loss)/d(input), summed over the batch, with normalization layers frozen
/// (inference mode).
template <typename T>
MatX<T> input_gradient(Network<T>& net, const MatX<T>& x, const LossSpec& spec) {
  if (spec.kind == LossSpec::Kind::Constant)
    return MatX<T>::Zero(x.rows(), x.cols());
  std::vector<LayerCache<T>> tape;
  MatX<T> logits = net.forward(x, Mode::Eval, &tape);
  MatX<T> dlogits = cross_entropy_grad(logits, spec.labels, Reduction::Sum);
  return net.backward(dlogits, tape, /*want_param_grads=*/false,
                      /*want_input_grad=*/true);
}

}  // namespace shadowforge
