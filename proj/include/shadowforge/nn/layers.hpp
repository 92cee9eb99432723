#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shadowforge/core/rng.hpp"
#include "shadowforge/core/types.hpp"

namespace shadowforge {

enum class Mode { Train, Eval };

/// Per-layer forward tape: whatever the layer's backward pass needs.
template <typename T>
struct LayerCache {
  Mode mode = Mode::Eval;
  MatX<T> input;
  std::vector<MatX<T>> aux;
  std::vector<LayerCache<T>> children;
};

/// Shape-bound network layer. Parameters and persistent state (normalization
/// running statistics) live in base-class vectors so collection, cloning and
/// checkpointing need no per-layer code. forward is const: the only mutation
/// is the running-stat update in Train mode, hence the mutable state.
template <typename T>
class Layer {
 public:
  virtual ~Layer() = default;

  virtual std::string kind() const = 0;

  /// Fix input geometry; allocates parameters; returns the output shape.
  virtual TensorShape bind(const TensorShape& in) = 0;

  virtual void forward(const MatX<T>& in, MatX<T>& out, LayerCache<T>* cache,
                       Mode mode) const = 0;

  /// dout -> din (skipped unless need_din); param_grads, when non-null, points
  /// at this layer's grad tensors in collect order and is overwritten.
  virtual void backward(const MatX<T>& dout, const LayerCache<T>& cache, MatX<T>& din,
                        MatX<T>* param_grads, bool need_din) const = 0;

  virtual void init(Rng&) {}
  virtual std::unique_ptr<Layer<T>> clone() const = 0;

  virtual int num_param_tensors() const { return static_cast<int>(params_.size()); }
  virtual void collect_params(std::vector<MatX<T>*>& out) {
    for (auto& p : params_) out.push_back(&p);
  }
  virtual void collect_params(std::vector<const MatX<T>*>& out) const {
    for (const auto& p : params_) out.push_back(&p);
  }
  virtual void collect_state(std::vector<MatX<T>*>& out) {
    for (auto& s : state_) out.push_back(&s);
  }
  virtual void collect_state(std::vector<const MatX<T>*>& out) const {
    for (const auto& s : state_) out.push_back(&s);
  }

  /// Fine-tuning switch: layers with running statistics stop re-estimating
  /// them and normalize with the stored values even in Train mode. No-op for
  /// stateless layers.
  virtual void set_stats_frozen(bool) {}

  const TensorShape& in_shape() const { return in_; }
  const TensorShape& out_shape() const { return out_; }

 protected:
  TensorShape in_{};
  TensorShape out_{};
  std::vector<MatX<T>> params_;
  mutable std::vector<MatX<T>> state_;
};

template <typename T>
class Dense final : public Layer<T> {
 public:
  explicit Dense(int out_features) : m_(out_features) {
    if (out_features < 1) throw InvalidInput("Dense: out_features must be >= 1");
  }

  std::string kind() const override { return "dense"; }

  TensorShape bind(const TensorShape& in) override {
    this->in_ = in;
    this->out_ = {m_, 1, 1};
    this->params_ = {MatX<T>::Zero(in.elems(), m_), MatX<T>::Zero(m_, 1)};
    return this->out_;
  }

  void init(Rng& rng) override {
    MatX<T>& w = this->params_[0];
    const double stddev = std::sqrt(2.0 / static_cast<double>(w.rows()));
    for (Eigen::Index i = 0; i < w.size(); ++i)
      w.data()[i] = static_cast<T>(rng.normal() * stddev);
    this->params_[1].setZero();
  }

  void forward(const MatX<T>& in, MatX<T>& out, LayerCache<T>* cache,
               Mode mode) const override {
    if (cache) {
      cache->mode = mode;
      cache->input = in;
    }
    out.noalias() = in * this->params_[0];
    out.rowwise() += this->params_[1].col(0).transpose();
  }

  void backward(const MatX<T>& dout, const LayerCache<T>& cache, MatX<T>& din,
                MatX<T>* pg, bool need_din) const override {
    if (pg) {
      pg[0].noalias() = cache.input.transpose() * dout;
      pg[1] = dout.colwise().sum().transpose();
    }
    if (need_din) din.noalias() = dout * this->params_[0].transpose();
  }

  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<Dense>(*this);
  }

 private:
  int m_;
};

template <typename T>
class Conv2d final : public Layer<T> {
 public:
  Conv2d(int out_channels, int kernel, int stride = 1, int pad = 0)
      : cout_(out_channels), k_(kernel), stride_(stride), pad_(pad) {
    if (out_channels < 1 || kernel < 1 || stride < 1 || pad < 0)
      throw InvalidInput("Conv2d: bad geometry");
  }

  std::string kind() const override { return "conv2d"; }

  TensorShape bind(const TensorShape& in) override {
    if (in.height + 2 * pad_ < k_ || in.width + 2 * pad_ < k_)
      throw InvalidInput("Conv2d: kernel larger than padded input " + in.str());
    this->in_ = in;
    ho_ = (in.height + 2 * pad_ - k_) / stride_ + 1;
    wo_ = (in.width + 2 * pad_ - k_) / stride_ + 1;
    this->out_ = {cout_, ho_, wo_};
    const int patch = in.channels * k_ * k_;
    this->params_ = {MatX<T>::Zero(cout_, patch), MatX<T>::Zero(cout_, 1)};
    return this->out_;
  }

  void init(Rng& rng) override {
    MatX<T>& w = this->params_[0];
    const double stddev = std::sqrt(2.0 / static_cast<double>(w.cols()));
    for (Eigen::Index i = 0; i < w.size(); ++i)
      w.data()[i] = static_cast<T>(rng.normal() * stddev);
    this->params_[1].setZero();
  }

  void forward(const MatX<T>& in, MatX<T>& out, LayerCache<T>* cache,
               Mode mode) const override {
    const int n = static_cast<int>(in.rows());
    const int hw = ho_ * wo_;
    out.resize(n, this->out_.elems());
    if (cache) {
      cache->mode = mode;
      cache->input = in;
    }
    const MatX<T>& w = this->params_[0];
    const MatX<T>& b = this->params_[1];
    MatX<T> patches(w.cols(), hw);
    MatX<T> result(cout_, hw);
    for (int i = 0; i < n; ++i) {
      im2col(in.row(i), patches);
      result.noalias() = w * patches;
      result.colwise() += b.col(0);
      for (int c = 0; c < cout_; ++c) out.row(i).segment(c * hw, hw) = result.row(c);
    }
  }

  void backward(const MatX<T>& dout, const LayerCache<T>& cache, MatX<T>& din,
                MatX<T>* pg, bool need_din) const override {
    const MatX<T>& in = cache.input;
    const int n = static_cast<int>(in.rows());
    const int hw = ho_ * wo_;
    const MatX<T>& w = this->params_[0];
    if (pg) {
      pg[0] = MatX<T>::Zero(w.rows(), w.cols());
      pg[1] = MatX<T>::Zero(cout_, 1);
    }
    if (need_din) din = MatX<T>::Zero(n, this->in_.elems());
    MatX<T> patches(w.cols(), hw);
    MatX<T> d(cout_, hw);
    MatX<T> dpatches(w.cols(), hw);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < cout_; ++c) d.row(c) = dout.row(i).segment(c * hw, hw);
      if (pg) {
        im2col(in.row(i), patches);
        pg[0].noalias() += d * patches.transpose();
        pg[1] += d.rowwise().sum();
      }
      if (need_din) {
        dpatches.noalias() = w.transpose() * d;
        col2im_add(dpatches, din, i);
      }
    }
  }

  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<Conv2d>(*this);
  }

 private:
  /// Patch matrix: row (c*k+ky)*k+kx, column oy*wo+ox; zero padding.
  template <typename Row>
  void im2col(const Row& img, MatX<T>& patches) const {
    const TensorShape& s = this->in_;
    for (int c = 0; c < s.channels; ++c)
      for (int ky = 0; ky < k_; ++ky)
        for (int kx = 0; kx < k_; ++kx) {
          const int row = (c * k_ + ky) * k_ + kx;
          for (int oy = 0; oy < ho_; ++oy) {
            const int iy = oy * stride_ + ky - pad_;
            if (iy < 0 || iy >= s.height) {
              patches.row(row).segment(oy * wo_, wo_).setZero();
              continue;
            }
            for (int ox = 0; ox < wo_; ++ox) {
              const int ix = ox * stride_ + kx - pad_;
              patches(row, oy * wo_ + ox) =
                  (ix >= 0 && ix < s.width) ? img[s.offset(c, iy, ix)] : T(0);
            }
          }
        }
  }

  void col2im_add(const MatX<T>& dpatches, MatX<T>& din, int sample) const {
    const TensorShape& s = this->in_;
    for (int c = 0; c < s.channels; ++c)
      for (int ky = 0; ky < k_; ++ky)
        for (int kx = 0; kx < k_; ++kx) {
          const int row = (c * k_ + ky) * k_ + kx;
          for (int oy = 0; oy < ho_; ++oy) {
            const int iy = oy * stride_ + ky - pad_;
            if (iy < 0 || iy >= s.height) continue;
            for (int ox = 0; ox < wo_; ++ox) {
              const int ix = ox * stride_ + kx - pad_;
              if (ix >= 0 && ix < s.width)
                din(sample, s.offset(c, iy, ix)) += dpatches(row, oy * wo_ + ox);
            }
          }
        }
  }

  int cout_, k_, stride_, pad_;
  int ho_ = 0, wo_ = 0;
};

/// Per-channel batch normalization over (N,H,W); biased variance. Train mode
/// normalizes with batch statistics and updates running stats; Eval mode is a
/// frozen affine map, which keeps attack gradients deterministic.
template <typename T>
class BatchNorm2d final : public Layer<T> {
 public:
  std::string kind() const override { return "batchnorm2d"; }

  TensorShape bind(const TensorShape& in) override {
    this->in_ = in;
    this->out_ = in;
    const int c = in.channels;
    this->params_ = {MatX<T>::Ones(c, 1), MatX<T>::Zero(c, 1)};   // gamma, beta
    this->state_ = {MatX<T>::Zero(c, 1), MatX<T>::Ones(c, 1)};    // mean, var
    return this->out_;
  }

  void forward(const MatX<T>& in, MatX<T>& out, LayerCache<T>* cache,
               Mode mode) const override {
    const int channels = this->in_.channels;
    const int hw = this->in_.height * this->in_.width;
    const int n = static_cast<int>(in.rows());
    const T count = static_cast<T>(n) * static_cast<T>(hw);
    out.resize(n, in.cols());
    MatX<T> xhat(n, in.cols());
    VecX<T> inv_std(channels);
    const bool batch_stats = (mode == Mode::Train) && !frozen_;
    for (int c = 0; c < channels; ++c) {
      auto block = in.middleCols(c * hw, hw);
      T mean, var;
      if (batch_stats) {
        mean = block.sum() / count;
        var = (block.array() - mean).square().sum() / count;
        this->state_[0](c, 0) = (T(1) - kMomentum) * this->state_[0](c, 0) + kMomentum * mean;
        this->state_[1](c, 0) = (T(1) - kMomentum) * this->state_[1](c, 0) + kMomentum * var;
      } else {
        mean = this->state_[0](c, 0);
        var = this->state_[1](c, 0);
      }
      const T is = T(1) / std::sqrt(var + kEps);
      inv_std[c] = is;
      xhat.middleCols(c * hw, hw) = ((block.array() - mean) * is).matrix();
      out.middleCols(c * hw, hw) =
          (xhat.middleCols(c * hw, hw).array() * this->params_[0](c, 0) +
           this->params_[1](c, 0))
              .matrix();
    }
    if (cache) {
      // With frozen statistics the map is affine in the input, so backward
      // must take the same linear path as Eval.
      cache->mode = batch_stats ? Mode::Train : Mode::Eval;
      cache->aux.resize(2);
      cache->aux[0] = std::move(xhat);
      cache->aux[1] = inv_std;
    }
  }

  void backward(const MatX<T>& dout, const LayerCache<T>& cache, MatX<T>& din,
                MatX<T>* pg, bool need_din) const override {
    const int channels = this->in_.channels;
    const int hw = this->in_.height * this->in_.width;
    const int n = static_cast<int>(dout.rows());
    const T count = static_cast<T>(n) * static_cast<T>(hw);
    const MatX<T>& xhat = cache.aux[0];
    const MatX<T>& inv_std = cache.aux[1];
    if (pg) {
      pg[0].resize(channels, 1);
      pg[1].resize(channels, 1);
    }
    if (need_din) din.resize(n, dout.cols());
    for (int c = 0; c < channels; ++c) {
      auto dblock = dout.middleCols(c * hw, hw);
      auto xblock = xhat.middleCols(c * hw, hw);
      const T dgamma = (dblock.array() * xblock.array()).sum();
      const T dbeta = dblock.sum();
      if (pg) {
        pg[0](c, 0) = dgamma;
        pg[1](c, 0) = dbeta;
      }
      if (!need_din) continue;
      const T scale = this->params_[0](c, 0) * inv_std(c, 0);
      if (cache.mode == Mode::Train) {
        din.middleCols(c * hw, hw) =
            (scale / count) *
            (count * dblock.array() - dbeta - xblock.array() * dgamma).matrix();
      } else {
        din.middleCols(c * hw, hw) = scale * dblock;
      }
    }
  }

  void set_stats_frozen(bool frozen) override { frozen_ = frozen; }

  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<BatchNorm2d>(*this);
  }

 private:
  static constexpr T kEps = T(1e-5);
  static constexpr T kMomentum = T(0.1);
  bool frozen_ = false;
};

template <typename T>
class ReLU final : public Layer<T> {
 public:
  std::string kind() const override { return "relu"; }

  TensorShape bind(const TensorShape& in) override {
    this->in_ = in;
    this->out_ = in;
    return in;
  }

  void forward(const MatX<T>& in, MatX<T>& out, LayerCache<T>* cache,
               Mode mode) const override {
    out = in.cwiseMax(T(0));
    if (cache) {
      cache->mode = mode;
      cache->input = in;
    }
  }

  void backward(const MatX<T>& dout, const LayerCache<T>& cache, MatX<T>& din,
                MatX<T>*, bool need_din) const override {
    if (need_din)
      din = (cache.input.array() > T(0)).select(dout, MatX<T>::Zero(dout.rows(), dout.cols()));
  }

  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<ReLU>(*this);
  }
};

/// 2x2, stride-2 average pooling; input dims must be even.
template <typename T>
class AvgPool2d final : public Layer<T> {
 public:
  std::string kind() const override { return "avgpool2d"; }

  TensorShape bind(const TensorShape& in) override {
    if (in.height % 2 || in.width % 2)
      throw InvalidInput("AvgPool2d: input dims must be even, got " + in.str());
    this->in_ = in;
    this->out_ = {in.channels, in.height / 2, in.width / 2};
    return this->out_;
  }

  void forward(const MatX<T>& in, MatX<T>& out, LayerCache<T>* cache,
               Mode mode) const override {
    const TensorShape& si = this->in_;
    const TensorShape& so = this->out_;
    const int n = static_cast<int>(in.rows());
    out.resize(n, so.elems());
    if (cache) cache->mode = mode;
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < si.channels; ++c)
        for (int oy = 0; oy < so.height; ++oy)
          for (int ox = 0; ox < so.width; ++ox) {
            const T sum = in(i, si.offset(c, 2 * oy, 2 * ox)) +
                          in(i, si.offset(c, 2 * oy, 2 * ox + 1)) +
                          in(i, si.offset(c, 2 * oy + 1, 2 * ox)) +
                          in(i, si.offset(c, 2 * oy + 1, 2 * ox + 1));
            out(i, so.offset(c, oy, ox)) = sum * T(0.25);
          }
  }

  void backward(const MatX<T>& dout, const LayerCache<T>&, MatX<T>& din, MatX<T>*,
                bool need_din) const override {
    if (!need_din) return;
    const TensorShape& si = this->in_;
    const TensorShape& so = this->out_;
    const int n = static_cast<int>(dout.rows());
    din.resize(n, si.elems());
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < si.channels; ++c)
        for (int oy = 0; oy < so.height; ++oy)
          for (int ox = 0; ox < so.width; ++ox) {
            const T g = dout(i, so.offset(c, oy, ox)) * T(0.25);
            din(i, si.offset(c, 2 * oy, 2 * ox)) = g;
            din(i, si.offset(c, 2 * oy, 2 * ox + 1)) = g;
            din(i, si.offset(c, 2 * oy + 1, 2 * ox)) = g;
            din(i, si.offset(c, 2 * oy + 1, 2 * ox + 1)) = g;
          }
  }

  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<AvgPool2d>(*this);
  }
};

/// 2x2, stride-2 max pooling; ties break toward the first scanned position.
template <typename T>
class MaxPool2d final : public Layer<T> {
 public:
  std::string kind() const override { return "maxpool2d"; }

  TensorShape bind(const TensorShape& in) override {
    if (in.height % 2 || in.width % 2)
      throw InvalidInput("MaxPool2d: input dims must be even, got " + in.str());
    this->in_ = in;
    this->out_ = {in.channels, in.height / 2, in.width / 2};
    return this->out_;
  }

  void forward(const MatX<T>& in, MatX<T>& out, LayerCache<T>* cache,
               Mode mode) const override {
    const TensorShape& si = this->in_;
    const TensorShape& so = this->out_;
    const int n = static_cast<int>(in.rows());
    out.resize(n, so.elems());
    MatX<T> argmax;
    if (cache) argmax.resize(n, so.elems());
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < si.channels; ++c)
        for (int oy = 0; oy < so.height; ++oy)
          for (int ox = 0; ox < so.width; ++ox) {
            int best = si.offset(c, 2 * oy, 2 * ox);
            T bv = in(i, best);
            const int cand[3] = {si.offset(c, 2 * oy, 2 * ox + 1),
                                 si.offset(c, 2 * oy + 1, 2 * ox),
                                 si.offset(c, 2 * oy + 1, 2 * ox + 1)};
            for (int idx : cand)
              if (in(i, idx) > bv) {
                bv = in(i, idx);
                best = idx;
              }
            out(i, so.offset(c, oy, ox)) = bv;
            if (cache) argmax(i, so.offset(c, oy, ox)) = static_cast<T>(best);
          }
    if (cache) {
      cache->mode = mode;
      cache->aux.assign(1, std::move(argmax));
    }
  }

  void backward(const MatX<T>& dout, const LayerCache<T>& cache, MatX<T>& din,
                MatX<T>*, bool need_din) const override {
    if (!need_din) return;
    const MatX<T>& argmax = cache.aux[0];
    din = MatX<T>::Zero(dout.rows(), this->in_.elems());
    for (Eigen::Index i = 0; i < dout.rows(); ++i)
      for (Eigen::Index j = 0; j < dout.cols(); ++j)
        din(i, static_cast<int>(argmax(i, j))) += dout(i, j);
  }

  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<MaxPool2d>(*this);
  }
};

template <typename T>
class GlobalAvgPool final : public Layer<T> {
 public:
  std::string kind() const override { return "globalavgpool"; }

  TensorShape bind(const TensorShape& in) override {
    this->in_ = in;
    this->out_ = {in.channels, 1, 1};
    return this->out_;
  }

  void forward(const MatX<T>& in, MatX<T>& out, LayerCache<T>* cache,
               Mode mode) const override {
    const int hw = this->in_.height * this->in_.width;
    const int n = static_cast<int>(in.rows());
    out.resize(n, this->in_.channels);
    if (cache) cache->mode = mode;
    for (int c = 0; c < this->in_.channels; ++c)
      out.col(c) = in.middleCols(c * hw, hw).rowwise().sum() / static_cast<T>(hw);
  }

  void backward(const MatX<T>& dout, const LayerCache<T>&, MatX<T>& din, MatX<T>*,
                bool need_din) const override {
    if (!need_din) return;
    const int hw = this->in_.height * this->in_.width;
    din.resize(dout.rows(), this->in_.elems());
    for (int c = 0; c < this->in_.channels; ++c)
      din.middleCols(c * hw, hw).colwise() = dout.col(c) / static_cast<T>(hw);
  }

  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<GlobalAvgPool>(*this);
  }
};

/// conv-bn-relu-conv-bn plus identity (or 1x1 conv-bn when shape changes),
/// ReLU after the sum.
template <typename T>
class ResidualBlock final : public Layer<T> {
 public:
  ResidualBlock(int out_channels, int stride)
      : cout_(out_channels),
        stride_(stride),
        conv1_(out_channels, 3, stride, 1),
        conv2_(out_channels, 3, 1, 1) {}

  std::string kind() const override { return "residual"; }

  TensorShape bind(const TensorShape& in) override {
    this->in_ = in;
    TensorShape mid = conv1_.bind(in);
    bn1_.bind(mid);
    TensorShape body = conv2_.bind(mid);
    bn2_.bind(body);
    shortcut_ = (stride_ != 1 || in.channels != cout_);
    if (shortcut_) {
      sc_conv_.emplace(cout_, 1, stride_, 0);
      TensorShape sc = sc_conv_->bind(in);
      if (!(sc == body))
        throw InvalidInput("ResidualBlock: shortcut shape " + sc.str() +
                           " != body shape " + body.str());
      sc_bn_.emplace();
      sc_bn_->bind(sc);
    }
    this->out_ = body;
    return this->out_;
  }

  void init(Rng& rng) override {
    conv1_.init(rng);
    bn1_.init(rng);
    conv2_.init(rng);
    bn2_.init(rng);
    if (shortcut_) {
      sc_conv_->init(rng);
      sc_bn_->init(rng);
    }
  }

  void forward(const MatX<T>& in, MatX<T>& out, LayerCache<T>* cache,
               Mode mode) const override {
    if (cache) {
      cache->mode = mode;
      cache->children.resize(6);
      cache->aux.resize(2);
    }
    auto child = [&](int i) { return cache ? &cache->children[i] : nullptr; };
    MatX<T> a, b, c2, d;
    conv1_.forward(in, a, child(0), mode);
    bn1_.forward(a, b, child(1), mode);
    if (cache) cache->aux[0] = b;
    MatX<T> r = b.cwiseMax(T(0));
    conv2_.forward(r, c2, child(2), mode);
    bn2_.forward(c2, d, child(3), mode);
    MatX<T> sum;
    if (shortcut_) {
      MatX<T> t, sc;
      sc_conv_->forward(in, t, child(4), mode);
      sc_bn_->forward(t, sc, child(5), mode);
      sum = d + sc;
    } else {
      sum = d + in;
    }
    if (cache) cache->aux[1] = sum;
    out = sum.cwiseMax(T(0));
  }

  void backward(const MatX<T>& dout, const LayerCache<T>& cache, MatX<T>& din,
                MatX<T>* pg, bool need_din) const override {
    const MatX<T>& sum = cache.aux[1];
    MatX<T> dsum =
        (sum.array() > T(0)).select(dout, MatX<T>::Zero(dout.rows(), dout.cols()));
    MatX<T> dd, dc2, db, din_main;
    bn2_.backward(dsum, cache.children[3], dd, pg ? pg + 6 : nullptr, true);
    conv2_.backward(dd, cache.children[2], dc2, pg ? pg + 4 : nullptr, true);
    MatX<T> dr = (cache.aux[0].array() > T(0))
                     .select(dc2, MatX<T>::Zero(dc2.rows(), dc2.cols()));
    bn1_.backward(dr, cache.children[1], db, pg ? pg + 2 : nullptr, true);
    conv1_.backward(db, cache.children[0], din_main, pg ? pg + 0 : nullptr, need_din);
    if (shortcut_) {
      MatX<T> dt, din_sc;
      sc_bn_->backward(dsum, cache.children[5], dt, pg ? pg + 10 : nullptr, true);
      sc_conv_->backward(dt, cache.children[4], din_sc, pg ? pg + 8 : nullptr, need_din);
      if (need_din) din = din_main + din_sc;
    } else if (need_din) {
      din = din_main + dsum;
    }
  }

  int num_param_tensors() const override { return shortcut_ ? 12 : 8; }

  void collect_params(std::vector<MatX<T>*>& out) override {
    conv1_.collect_params(out);
    bn1_.collect_params(out);
    conv2_.collect_params(out);
    bn2_.collect_params(out);
    if (shortcut_) {
      sc_conv_->collect_params(out);
      sc_bn_->collect_params(out);
    }
  }
  void collect_params(std::vector<const MatX<T>*>& out) const override {
    conv1_.collect_params(out);
    bn1_.collect_params(out);
    conv2_.collect_params(out);
    bn2_.collect_params(out);
    if (shortcut_) {
      sc_conv_->collect_params(out);
      sc_bn_->collect_params(out);
    }
  }
  void collect_state(std::vector<MatX<T>*>& out) override {
    bn1_.collect_state(out);
    bn2_.collect_state(out);
    if (shortcut_) sc_bn_->collect_state(out);
  }
  void collect_state(std::vector<const MatX<T>*>& out) const override {
    bn1_.collect_state(out);
    bn2_.collect_state(out);
    if (shortcut_) sc_bn_->collect_state(out);
  }

  void set_stats_frozen(bool frozen) override {
    bn1_.set_stats_frozen(frozen);
    bn2_.set_stats_frozen(frozen);
    if (shortcut_) sc_bn_->set_stats_frozen(frozen);
  }

  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<ResidualBlock>(*this);
  }

 private:
  int cout_, stride_;
  bool shortcut_ = false;
  Conv2d<T> conv1_;
  BatchNorm2d<T> bn1_;
  Conv2d<T> conv2_;
  BatchNorm2d<T> bn2_;
  std::optional<Conv2d<T>> sc_conv_;
  std::optional<BatchNorm2d<T>> sc_bn_;
};

}  // namespace shadowforge
