#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ordemb/tensor.hpp"

namespace ordemb {

// Adam with bias-corrected first/second moment estimates. One state per
// model; the moment buffers are bound to the parameter list at init and
// shape-checked on every step.
struct AdamState {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> m;  // first moments, one buffer per param
  std::vector<std::vector<double>> v;  // second moments
  std::vector<std::vector<std::size_t>> shapes;

  static AdamState init(const std::vector<Tensor>& params, double lr = 0.001);
};

// p -= lr * m_hat / (sqrt(v_hat) + eps), in place. Gradients are read, not
// cleared; the caller zeroes them between steps.
void adam_step(AdamState& state, const std::vector<Tensor>& params);

// Divides lr by `factor` after `patience` consecutive epochs without
// improvement of the validation metric (lower is better), never below min_lr.
struct PlateauSchedule {
  std::size_t patience = 3;
  double factor = 10.0;
  double min_lr = 1e-7;
  double best_metric = std::numeric_limits<double>::infinity();
  std::size_t stall = 0;
};

// Call once per epoch. Returns true when the learning rate was reduced.
bool plateau_update(PlateauSchedule& sched, AdamState& state, double val_metric);

}  // namespace ordemb
