#pragma once

#include <filesystem>
#include <numeric>
#include <vector>

#include "shadowforge/nn/network.hpp"
#include "shadowforge/train/schedule.hpp"

namespace shadowforge {

struct HistoryRow {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double train_acc = 0.0;
};
using History = std::vector<HistoryRow>;

void save_history_csv(const std::filesystem::path& path, const History& history);
History load_history_csv(const std::filesystem::path& path);

/// SGD with momentum and classic weight decay folded into the gradient:
/// v = mu*v + (g + wd*p); p -= lr*v. A positive anchor_decay adds a proximal
/// pull ad*(p - p0) toward the parameter values captured at construction,
/// bounding how far a fine-tune can wander from its starting point.
template <typename T>
class Sgd {
 public:
  Sgd(Network<T>& net, double momentum, double weight_decay, double anchor_decay = 0.0)
      : momentum_(static_cast<T>(momentum)),
        wd_(static_cast<T>(weight_decay)),
        anchor_(static_cast<T>(anchor_decay)) {
    for (auto* p : net.param_tensors()) {
      velocity_.push_back(MatX<T>::Zero(p->rows(), p->cols()));
      if (anchor_decay > 0) reference_.push_back(*p);
    }
  }

  void step(Network<T>& net, double lr) {
    auto params = net.param_tensors();
    auto grads = net.grad_tensors();
    if (params.size() != grads.size() || params.size() != velocity_.size())
      throw InvalidInput("Sgd::step: parameter/gradient mismatch");
    const T eta = static_cast<T>(lr);
    for (size_t i = 0; i < params.size(); ++i) {
      velocity_[i] = momentum_ * velocity_[i] + (*grads[i] + wd_ * *params[i]);
      if (anchor_ > 0) velocity_[i] += anchor_ * (*params[i] - reference_[i]);
      *params[i] -= eta * velocity_[i];
    }
  }

 private:
  T momentum_, wd_, anchor_;
  std::vector<MatX<T>> velocity_;
  std::vector<MatX<T>> reference_;
};

/// Mirrors one image row of an N×elems matrix left-right in place.
template <typename T>
void flip_horizontal_inplace(MatX<T>& batch, int row, const TensorShape& shape) {
  for (int c = 0; c < shape.channels; ++c)
    for (int y = 0; y < shape.height; ++y)
      for (int x = 0; x < shape.width / 2; ++x)
        std::swap(batch(row, shape.offset(c, y, x)),
                  batch(row, shape.offset(c, y, shape.width - 1 - x)));
}

namespace detail {

/// Shared epoch loop; exactly one of `hard` / `soft` is non-null.
template <typename T>
History fit_impl(Network<T>& net, const ImageBatch<T>& images,
                 const std::vector<int>* hard, const MatX<T>* soft,
                 const TrainSchedule& sched) {
  sched.validate();
  const int n = images.size();
  if (n < 1) throw InvalidInput("fit: empty training set");
  if (hard) check_labels<T>(*hard, n, net.num_classes());
  if (soft) {
    if (soft->rows() != n || soft->cols() != net.num_classes())
      throw InvalidInput("fit: soft-target shape mismatch");
    check_prob_rows(*soft);
  }

  Sgd<T> opt(net, sched.momentum, sched.weight_decay, sched.anchor_decay);
  Rng rng(derive_seed(sched.seed, "fit"));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<LayerCache<T>> tape;
  History history;
  history.reserve(sched.epochs);

  // Spread samples over ceil(n/batch_size) equal-as-possible minibatches
  // instead of leaving a ragged tail: a tiny trailing batch carries the same
  // optimizer step weight as a full one and its batch statistics are noise.
  const int num_batches =
      (n + sched.batch_size - 1) / sched.batch_size;
  const int base = n / num_batches;
  const int remainder = n % num_batches;

  for (int epoch = 0; epoch < sched.epochs; ++epoch) {
    const double lr = cosine_lr(sched.initial_lr, epoch, sched.epochs);
    rng.shuffle(order);
    double loss_sum = 0.0;
    int64_t correct = 0;
    int start = 0;
    for (int batch = 0; batch < num_batches; ++batch) {
      const int b = base + (batch < remainder ? 1 : 0);
      MatX<T> xb(b, images.data.cols());
      std::vector<int> yb(b);
      for (int i = 0; i < b; ++i) {
        const int src = order[start + i];
        xb.row(i) = images.data.row(src);
        yb[i] = hard ? (*hard)[src] : 0;
        if (sched.augment_hflip && rng.uniform() < 0.5)
          flip_horizontal_inplace<T>(xb, i, images.shape);
      }
      MatX<T> logits = net.forward(xb, Mode::Train, &tape);
      MatX<T> dlogits;
      double loss;
      if (hard) {
        loss = static_cast<double>(cross_entropy(logits, yb, Reduction::Mean));
        dlogits = cross_entropy_grad(logits, yb, Reduction::Mean);
      } else {
        MatX<T> tb(b, soft->cols());
        for (int i = 0; i < b; ++i) tb.row(i) = soft->row(order[start + i]);
        loss = static_cast<double>(kl_divergence(tb, logits, Reduction::Mean));
        dlogits = kl_grad(tb, logits, Reduction::Mean);
        yb = argmax_rows(tb);
      }
      auto pred = argmax_rows(logits);
      for (int i = 0; i < b; ++i) correct += (pred[i] == yb[i]);
      loss_sum += loss * b;
      net.backward(dlogits, tape, /*want_param_grads=*/true, /*want_input_grad=*/false);
      opt.step(net, lr);
      start += b;
    }
    history.push_back({epoch, lr, loss_sum / n, static_cast<double>(correct) / n});
  }
  return history;
}

}  // namespace detail

template <typename T>
History fit_hard(Network<T>& net, const ImageBatch<T>& images,
                 const std::vector<int>& labels, const TrainSchedule& sched) {
  return detail::fit_impl<T>(net, images, &labels, nullptr, sched);
}

/// Minimizes KL(targets ‖ model) at temperature 1. With one-hot targets the
/// gradients coincide with hard-label cross-entropy, so the two paths agree.
template <typename T>
History fit_soft(Network<T>& net, const ImageBatch<T>& images, const MatX<T>& targets,
                 const TrainSchedule& sched) {
  return detail::fit_impl<T>(net, images, nullptr, &targets, sched);
}

}  // namespace shadowforge
