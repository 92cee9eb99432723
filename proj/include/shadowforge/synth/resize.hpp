#pragma once

#include <algorithm>
#include <cmath>

#include "shadowforge/core/types.hpp"

namespace shadowforge {

/// Area-average downscale to (target_h, target_w). Each output pixel is the
/// exact box integral of the input region it covers (partial input pixels
/// weighted by overlap), so a constant image stays constant and a same-size
/// call is the identity. Upscaling is rejected.
inline Image<float> resize_area(const Image<float>& in, int target_h, int target_w) {
  const TensorShape& s = in.shape;
  if (target_h < 1 || target_w < 1)
    throw InvalidInput("resize_area: target dims must be positive");
  if (target_h > s.height || target_w > s.width)
    throw InvalidInput("resize_area: upscaling from " + s.str() + " to " +
                       std::to_string(target_h) + "x" + std::to_string(target_w));

  TensorShape out_shape{s.channels, target_h, target_w};
  if (target_h == s.height && target_w == s.width) return Image<float>(out_shape, in.data);

  const double sy = static_cast<double>(s.height) / target_h;
  const double sx = static_cast<double>(s.width) / target_w;
  VecX<float> out(out_shape.elems());
  for (int c = 0; c < s.channels; ++c) {
    for (int oy = 0; oy < target_h; ++oy) {
      double y0 = oy * sy, y1 = (oy + 1) * sy;
      int iy0 = static_cast<int>(std::floor(y0));
      int iy1 = std::min(static_cast<int>(std::ceil(y1)), s.height);
      for (int ox = 0; ox < target_w; ++ox) {
        double x0 = ox * sx, x1 = (ox + 1) * sx;
        int ix0 = static_cast<int>(std::floor(x0));
        int ix1 = std::min(static_cast<int>(std::ceil(x1)), s.width);
        double acc = 0.0, area = 0.0;
        for (int iy = iy0; iy < iy1; ++iy) {
          double wy = std::min<double>(iy + 1, y1) - std::max<double>(iy, y0);
          for (int ix = ix0; ix < ix1; ++ix) {
            double wx = std::min<double>(ix + 1, x1) - std::max<double>(ix, x0);
            acc += wy * wx * in.at(c, iy, ix);
            area += wy * wx;
          }
        }
        out[out_shape.offset(c, oy, ox)] = static_cast<float>(acc / area);
      }
    }
  }
  return Image<float>(out_shape, std::move(out));
}

inline Image<float> resize_area(const Image<float>& in, const TensorShape& target) {
  if (target.channels != in.shape.channels)
    throw InvalidInput("resize_area: channel count mismatch");
  return resize_area(in, target.height, target.width);
}

}  // namespace shadowforge
