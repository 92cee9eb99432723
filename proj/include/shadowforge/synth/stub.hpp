#pragma once

#include "shadowforge/core/rng.hpp"
#include "shadowforge/core/types.hpp"
#include "shadowforge/synth/patterns.hpp"

namespace shadowforge {

/// Parameters of the offline generator's image family. Frozen: stub output is
/// part of the on-disk cache contract, so these must not drift.
inline PatternParams stub_pattern_params() {
  PatternParams p;
  p.angle_offset = 0.0;
  p.freq_offset = 0.0;
  p.amplitude = 0.05;
  p.noise_sigma = 0.10;
  p.phase_jitter = 0.2;
  p.angle_jitter = 1.00;
  p.mix = 0.0;
  return p;
}

/// Deterministic local stand-in for the text-to-image service: one image per
/// (class_index, seed), class-conditional grating plus seeded noise.
inline Image<float> stub_generate(int class_index, uint64_t seed, const TensorShape& shape) {
  if (class_index < 0) throw InvalidInput("stub_generate: negative class index");
  Rng rng(derive_seed(derive_seed(seed, "stub-image"),
                      static_cast<uint64_t>(class_index)));
  return render_pattern(class_index, stub_pattern_params(), shape, rng);
}

}  // namespace shadowforge
