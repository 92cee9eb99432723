#pragma once

#include <cmath>
#include <cstdint>

#include "shadowforge/core/errors.hpp"
#include "shadowforge/core/rng.hpp"

namespace shadowforge {

/// SGD training plan: momentum 0.9, weight decay 5e-4, cosine learning rate
/// from initial_lr over the epoch count. anchor_decay, when positive, decays
/// parameters toward their values at the start of the fit instead of toward
/// zero — proximal fine-tuning that bounds how far a small dataset can drag
/// a pretrained model. label_smoothing, when positive, mixes each one-hot
/// training target with the uniform distribution — a standard guard against
/// memorizing occasional wrong labels in a small supervision set.
struct TrainSchedule {
  int epochs = 1;
  int batch_size = 128;
  double initial_lr = 0.1;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  double anchor_decay = 0.0;
  double label_smoothing = 0.0;
  uint64_t seed = 0;
  bool augment_hflip = false;

  void validate() const {
    if (epochs < 1) throw InvalidInput("TrainSchedule: epochs must be >= 1");
    if (batch_size < 1) throw InvalidInput("TrainSchedule: batch_size must be >= 1");
    if (!(initial_lr > 0)) throw InvalidInput("TrainSchedule: initial_lr must be > 0");
    if (momentum < 0 || momentum >= 1)
      throw InvalidInput("TrainSchedule: momentum must be in [0,1)");
    if (weight_decay < 0) throw InvalidInput("TrainSchedule: negative weight_decay");
    if (anchor_decay < 0) throw InvalidInput("TrainSchedule: negative anchor_decay");
    if (label_smoothing < 0 || label_smoothing >= 1)
      throw InvalidInput("TrainSchedule: label_smoothing must be in [0,1)");
  }
};

/// eta_t = 0.5 * eta_0 * (1 + cos(pi * t / T)); t = 0 gives eta_0, t = T/2
/// gives half.
inline double cosine_lr(double initial_lr, int epoch, int total_epochs) {
  if (total_epochs < 1) throw InvalidInput("cosine_lr: total_epochs must be >= 1");
  if (epoch < 0 || epoch >= total_epochs)
    throw InvalidInput("cosine_lr: epoch out of range");
  return 0.5 * initial_lr * (1.0 + std::cos(kPi * epoch / total_epochs));
}

}  // namespace shadowforge
