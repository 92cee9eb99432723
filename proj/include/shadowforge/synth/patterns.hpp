#pragma once

#include <cmath>

#include "shadowforge/core/rng.hpp"
#include "shadowforge/core/types.hpp"

namespace shadowforge {

/// Class-conditional grating family shared by the offline image generator and
/// by procedural datasets. Each class owns an orientation (golden-angle
/// spacing, so any K stays well separated) and a spatial frequency; rendering
/// works in normalized coordinates so the same class looks alike at any
/// resolution.
struct PatternParams {
  double angle_offset = 0.0;  // rotates every class orientation (domain knob)
  double freq_offset = 0.0;   // shifts every class frequency (domain knob)
  double amplitude = 0.25;    // grating contrast around mid-gray
  double noise_sigma = 0.10;  // i.i.d. Gaussian pixel noise
  double phase_jitter = 0.2;  // per-sample phase wobble, fraction of pi
  double angle_jitter = 0.0;  // per-sample orientation wobble, radians
  double mix = 0.0;           // blend toward the next class's grating
};

inline double class_orientation(int class_index, double angle_offset = 0.0) {
  constexpr double kGoldenAngle = 2.39996322972865332;
  double theta = std::fmod(class_index * kGoldenAngle + angle_offset, kPi);
  return theta < 0 ? theta + kPi : theta;
}

inline double class_frequency(int class_index, double freq_offset = 0.0) {
  return 2.0 + static_cast<double>(class_index % 3) + freq_offset;
}

/// Signed grating value in [-1,1] at normalized coordinates (u,v) in (0,1).
inline double grating(int class_index, const PatternParams& p, double u, double v,
                      int channel, double sample_phase, double sample_angle) {
  double theta = class_orientation(class_index, p.angle_offset) + sample_angle;
  double freq = class_frequency(class_index, p.freq_offset);
  double axis = (u - 0.5) * std::cos(theta) + (v - 0.5) * std::sin(theta);
  double phase = 0.7 * class_index + 0.9 * channel + sample_phase;
  return std::cos(kTwoPi * freq * axis + phase);
}

/// Render one sample of the given class. Consumes from `rng`: one angle draw,
/// one phase draw, then one normal draw per (channel,row,col) in CHW order.
inline Image<float> render_pattern(int class_index, const PatternParams& p,
                                   const TensorShape& shape, Rng& rng) {
  if (class_index < 0) throw InvalidInput("render_pattern: negative class index");
  if (shape.elems() <= 0) throw InvalidInput("render_pattern: empty shape");
  double sample_angle = p.angle_jitter * (2.0 * rng.uniform() - 1.0);
  double sample_phase = p.phase_jitter * kPi * (2.0 * rng.uniform() - 1.0);
  VecX<float> data(shape.elems());
  for (int c = 0; c < shape.channels; ++c) {
    for (int y = 0; y < shape.height; ++y) {
      double v = (y + 0.5) / shape.height;
      for (int x = 0; x < shape.width; ++x) {
        double u = (x + 0.5) / shape.width;
        double g = grating(class_index, p, u, v, c, sample_phase, sample_angle);
        if (p.mix > 0.0) {
          double g2 = grating(class_index + 1, p, u, v, c, sample_phase, sample_angle);
          g = (1.0 - p.mix) * g + p.mix * g2;
        }
        double value = 0.5 + p.amplitude * g + p.noise_sigma * rng.normal();
        data[shape.offset(c, y, x)] =
            static_cast<float>(value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value));
      }
    }
  }
  return Image<float>(shape, std::move(data));
}

}  // namespace shadowforge
