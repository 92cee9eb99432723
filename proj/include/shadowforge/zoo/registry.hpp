#pragma once

#include <string>
#include <vector>

#include "shadowforge/core/errors.hpp"
#include "shadowforge/nn/network.hpp"

namespace shadowforge {

struct ClassifierSpec {
  std::string arch_id = "convnet-s";
  int num_classes = 2;
  TensorShape input_shape{3, 32, 32};
  uint64_t seed = 0;

  bool operator==(const ClassifierSpec&) const = default;
};

inline std::vector<std::string> registered_archs() {
  return {"linear", "mlp-s", "convnet-s", "vgg-tiny", "resnet-tiny-18",
          "resnet-tiny-34"};
}

/// Build + deterministically initialize a classifier. Target and substitute
/// differ by spec strings alone, so architecture mismatch experiments are
/// config-only.
template <typename T>
Network<T> build_classifier(const ClassifierSpec& spec) {
  if (spec.num_classes < 2)
    throw InvalidInput("build_classifier: num_classes must be >= 2");
  const int k = spec.num_classes;
  Network<T> net(spec.input_shape, k);
  auto conv = [&](int ch, int kernel, int stride, int pad) {
    net.add(std::make_unique<Conv2d<T>>(ch, kernel, stride, pad));
  };
  auto bn = [&] { net.add(std::make_unique<BatchNorm2d<T>>()); };
  auto relu = [&] { net.add(std::make_unique<ReLU<T>>()); };
  auto block = [&](int ch, int stride) {
    net.add(std::make_unique<ResidualBlock<T>>(ch, stride));
  };

  if (spec.arch_id == "linear") {
    net.add(std::make_unique<Dense<T>>(k));
  } else if (spec.arch_id == "mlp-s") {
    net.add(std::make_unique<Dense<T>>(128));
    relu();
    net.add(std::make_unique<Dense<T>>(k));
  } else if (spec.arch_id == "convnet-s") {
    conv(16, 3, 1, 1), bn(), relu();
    net.add(std::make_unique<AvgPool2d<T>>());
    conv(32, 3, 1, 1), bn(), relu();
    net.add(std::make_unique<AvgPool2d<T>>());
    conv(64, 3, 1, 1), bn(), relu();
    net.add(std::make_unique<GlobalAvgPool<T>>());
    net.add(std::make_unique<Dense<T>>(k));
  } else if (spec.arch_id == "vgg-tiny") {
    for (int ch : {16, 32}) {
      conv(ch, 3, 1, 1), bn(), relu();
      conv(ch, 3, 1, 1), bn(), relu();
      net.add(std::make_unique<MaxPool2d<T>>());
    }
    net.add(std::make_unique<Dense<T>>(128));
    relu();
    net.add(std::make_unique<Dense<T>>(k));
  } else if (spec.arch_id == "resnet-tiny-18" || spec.arch_id == "resnet-tiny-34") {
    const bool deep = spec.arch_id == "resnet-tiny-34";
    const int counts[4] = {deep ? 3 : 2, deep ? 4 : 2, deep ? 6 : 2, deep ? 3 : 2};
    const int channels[4] = {16, 32, 64, 128};
    conv(16, 3, 1, 1), bn(), relu();
    for (int stage = 0; stage < 4; ++stage)
      for (int i = 0; i < counts[stage]; ++i)
        block(channels[stage], (stage > 0 && i == 0) ? 2 : 1);
    net.add(std::make_unique<GlobalAvgPool<T>>());
    net.add(std::make_unique<Dense<T>>(k));
  } else {
    throw RegistryError("unknown architecture \"" + spec.arch_id + "\"");
  }
  net.init(spec.seed);
  return net;
}

}  // namespace shadowforge
