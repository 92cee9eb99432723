#pragma once

#include <string>
#include <vector>

#include "shadowforge/nn/network.hpp"

namespace shadowforge {

enum class AttackMethod { Fgsm, Bim, Pgd };

std::string attack_method_name(AttackMethod m);
AttackMethod parse_attack_method(const std::string& name);

enum class TargetRule { NextClass, FixedClass };

/// L-infinity signed-gradient attack description. FGSM is the single-step
/// special case: steps forced to 1, step size ε, no random start.
struct AttackSpec {
  AttackMethod method = AttackMethod::Fgsm;
  double epsilon = 8.0 / 255.0;
  double alpha = 2.0 / 255.0;
  int steps = 10;
  bool targeted = false;
  TargetRule target_rule = TargetRule::NextClass;
  int target_class = 0;
  bool random_start = true;  // honored by PGD only
  uint64_t seed = 0;

  void validate() const {
    if (!(epsilon > 0 && epsilon <= 1))
      throw InvalidInput("AttackSpec: epsilon must be in (0,1]");
    if (!(alpha > 0 && alpha <= epsilon))
      throw InvalidInput("AttackSpec: need 0 < alpha <= epsilon");
    if (steps < 1) throw InvalidInput("AttackSpec: steps must be >= 1");
  }

  int effective_steps() const { return method == AttackMethod::Fgsm ? 1 : steps; }
  double effective_alpha() const {
    return method == AttackMethod::Fgsm ? epsilon : alpha;
  }
  bool effective_random_start() const {
    return method == AttackMethod::Pgd && random_start;
  }
};

template <typename T>
struct AttackResult {
  ImageBatch<T> adversarial;
  VecX<T> linf_norms;              // per-example ‖x_adv − x‖∞
  std::vector<int> attack_labels;  // targeted: target class; else true label
};

/// sign with sign(0) = 0.
template <typename T>
MatX<T> signum(const MatX<T>& g) {
  return ((g.array() > T(0)).template cast<T>() -
          (g.array() < T(0)).template cast<T>())
      .matrix();
}

namespace detail {

/// One projected signed-ascent run shared by all three methods, so the
/// steps=1/alpha=ε collapse identities hold bitwise by construction.
template <typename T>
MatX<T> signed_ascent(Network<T>& net, const MatX<T>& x0,
                      const std::vector<int>& labels, const AttackSpec& spec,
                      const MatX<T>* start_noise) {
  const T eps = static_cast<T>(spec.epsilon);
  const T alpha = static_cast<T>(spec.effective_alpha());
  const T dir = spec.targeted ? T(-1) : T(1);
  MatX<T> xa = x0;
  if (start_noise) {
    xa += *start_noise;
    xa = (xa - x0).cwiseMax(-eps).cwiseMin(eps) + x0;
    xa = clamp01(xa);
  }
  LossSpec loss{LossSpec::Kind::CrossEntropy, labels};
  for (int step = 0; step < spec.effective_steps(); ++step) {
    MatX<T> g = input_gradient(net, xa, loss);
    xa += dir * alpha * signum(g);
    xa = (xa - x0).cwiseMax(-eps).cwiseMin(eps) + x0;
    xa = clamp01(xa);
  }
  return xa;
}

}  // namespace detail

/// Run the configured attack on every example. Labels are ground truth for
/// untargeted runs; targeted runs derive the per-example target class from
/// spec.target_rule.
template <typename T>
AttackResult<T> batch_attack(Network<T>& net, const ImageBatch<T>& batch,
                             const std::vector<int>& labels, const AttackSpec& spec) {
  spec.validate();
  if (!(batch.shape == net.input_shape()))
    throw InvalidInput("batch_attack: batch shape " + batch.shape.str() +
                       " does not match model input " + net.input_shape().str());
  const int n = batch.size();
  const int k = net.num_classes();
  check_labels<T>(labels, n, k);

  std::vector<int> attack_labels(n);
  if (spec.targeted) {
    if (spec.target_rule == TargetRule::FixedClass) {
      if (spec.target_class < 0 || spec.target_class >= k)
        throw InvalidInput("batch_attack: target_class out of range");
      std::fill(attack_labels.begin(), attack_labels.end(), spec.target_class);
    } else {
      for (int i = 0; i < n; ++i) attack_labels[i] = (labels[i] + 1) % k;
    }
  } else {
    attack_labels = labels;
  }

  MatX<T> noise;
  if (spec.effective_random_start()) {
    noise.resize(n, batch.data.cols());
    Rng rng(derive_seed(spec.seed, "pgd-start"));
    const double eps = spec.epsilon;
    for (int i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < noise.cols(); ++j)
        noise(i, j) = static_cast<T>(rng.uniform(-eps, eps));
  }

  AttackResult<T> result;
  result.adversarial = ImageBatch<T>::zeros(batch.shape, n);
  result.linf_norms.resize(n);
  result.attack_labels = attack_labels;

  constexpr int kChunk = 256;
  for (int start = 0; start < n; start += kChunk) {
    const int b = std::min(kChunk, n - start);
    MatX<T> x0 = batch.data.middleRows(start, b);
    std::vector<int> yb(attack_labels.begin() + start, attack_labels.begin() + start + b);
    MatX<T> chunk_noise;
    const MatX<T>* noise_ptr = nullptr;
    if (noise.size() > 0) {
      chunk_noise = noise.middleRows(start, b);
      noise_ptr = &chunk_noise;
    }
    MatX<T> xa = detail::signed_ascent(net, x0, yb, spec, noise_ptr);
    result.adversarial.data.middleRows(start, b) = xa;
    result.linf_norms.segment(start, b) = (xa - x0).cwiseAbs().rowwise().maxCoeff();
  }
  return result;
}

/// Equal-ε random perturbation baseline: x + U(−ε,ε), clipped to [0,1].
template <typename T>
ImageBatch<T> uniform_noise_baseline(const ImageBatch<T>& batch, double epsilon,
                                     uint64_t seed) {
  if (!(epsilon > 0 && epsilon <= 1))
    throw InvalidInput("uniform_noise_baseline: epsilon must be in (0,1]");
  Rng rng(derive_seed(seed, "noise-baseline"));
  ImageBatch<T> out = batch;
  for (int i = 0; i < out.size(); ++i)
    for (Eigen::Index j = 0; j < out.data.cols(); ++j)
      out.data(i, j) += static_cast<T>(rng.uniform(-epsilon, epsilon));
  out.data = clamp01(out.data);
  return out;
}

}  // namespace shadowforge
