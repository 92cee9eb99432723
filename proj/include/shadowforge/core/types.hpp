#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

#include "shadowforge/core/errors.hpp"

namespace shadowforge {

template <typename T>
using MatX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using VecX = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using ArrXX = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic>;

using MatXf = MatX<float>;
using MatXd = MatX<double>;
using VecXf = VecX<float>;
using VecXd = VecX<double>;

/// Extent of one image tensor, channel-major (C,H,W).
struct TensorShape {
  int channels = 0;
  int height = 0;
  int width = 0;

  int elems() const { return channels * height * width; }
  bool operator==(const TensorShape&) const = default;

  /// Flat offset of (c,y,x) within a CHW-ordered sample.
  int offset(int c, int y, int x) const { return (c * height + y) * width + x; }

  std::string str() const {
    return std::to_string(channels) + "x" + std::to_string(height) + "x" +
           std::to_string(width);
  }
};

/// A single image: CHW-flattened intensities, expected range [0,1].
template <typename T>
struct Image {
  TensorShape shape;
  VecX<T> data;

  Image() = default;
  Image(TensorShape s, VecX<T> d) : shape(s), data(std::move(d)) {
    if (data.size() != shape.elems())
      throw InvalidInput("Image: data size does not match shape " + shape.str());
  }

  T& at(int c, int y, int x) { return data[shape.offset(c, y, x)]; }
  T at(int c, int y, int x) const { return data[shape.offset(c, y, x)]; }

  template <typename U>
  Image<U> cast() const {
    return Image<U>(shape, data.template cast<U>());
  }
};

/// Batch of images: one sample per row, features CHW-ordered.
/// The universal tensor carried through generation, training and attacks.
template <typename T>
struct ImageBatch {
  TensorShape shape;
  MatX<T> data;  // N x shape.elems()

  ImageBatch() = default;
  ImageBatch(TensorShape s, MatX<T> d) : shape(s), data(std::move(d)) {
    if (data.cols() != shape.elems())
      throw InvalidInput("ImageBatch: column count " + std::to_string(data.cols()) +
                         " does not match shape " + shape.str());
  }

  static ImageBatch zeros(TensorShape s, int n) {
    return ImageBatch(s, MatX<T>::Zero(n, s.elems()));
  }

  int size() const { return static_cast<int>(data.rows()); }

  Image<T> image(int i) const { return Image<T>(shape, data.row(i).transpose()); }

  void set_image(int i, const Image<T>& img) {
    if (!(img.shape == shape)) throw InvalidInput("set_image: shape mismatch");
    data.row(i) = img.data.transpose();
  }

  ImageBatch rows(const std::vector<int>& idx) const {
    MatX<T> out(idx.size(), data.cols());
    for (size_t i = 0; i < idx.size(); ++i) out.row(i) = data.row(idx[i]);
    return ImageBatch(shape, std::move(out));
  }

  template <typename U>
  ImageBatch<U> cast() const {
    return ImageBatch<U>(shape, data.template cast<U>());
  }
};

using ImageBatchF = ImageBatch<float>;

template <typename T>
MatX<T> clamp01(const MatX<T>& m) {
  return m.array().min(T(1)).max(T(0)).matrix();
}

template <typename T>
VecX<T> clamp01(const VecX<T>& v) {
  return v.array().min(T(1)).max(T(0)).matrix();
}

}  // namespace shadowforge
