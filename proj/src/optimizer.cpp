#include "ordemb/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace ordemb {

AdamState AdamState::init(const std::vector<Tensor>& params, double lr) {
  if (!(lr > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  AdamState state;
  state.lr = lr;
  state.m.reserve(params.size());
  state.v.reserve(params.size());
  state.shapes.reserve(params.size());
  for (const Tensor& p : params) {
    state.m.emplace_back(p.size(), 0.0);
    state.v.emplace_back(p.size(), 0.0);
    state.shapes.push_back(p.shape());
  }
  return state;
}

void adam_step(AdamState& state, const std::vector<Tensor>& params) {
  if (params.size() != state.m.size()) {
    throw std::invalid_argument("adam_step: state tracks " + std::to_string(state.m.size()) +
                                " parameters, got " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].shape() != state.shapes[i]) {
      throw std::invalid_argument("adam_step: parameter " + std::to_string(i) +
                                  " shape drifted from " + shape_str(state.shapes[i]) +
                                  " to " + shape_str(params[i].shape()));
    }
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor p = params[i];
    const double* g = p.grad().data();
    double* pv = p.values().data();
    double* m = state.m[i].data();
    double* v = state.v[i].data();
    const std::size_t n = p.size();
    for (std::size_t j = 0; j < n; ++j) {
      m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * g[j];
      v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * g[j] * g[j];
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      pv[j] -= state.lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

bool plateau_update(PlateauSchedule& sched, AdamState& state, double val_metric) {
  if (val_metric < sched.best_metric) {
    sched.best_metric = val_metric;
    sched.stall = 0;
    return false;
  }
  sched.stall += 1;
  if (sched.stall < sched.patience) {
    return false;
  }
  sched.stall = 0;
  const double next = state.lr / sched.factor;
  if (state.lr <= sched.min_lr) {
    return false;  // already at the floor
  }
  state.lr = next < sched.min_lr ? sched.min_lr : next;
  return true;
}

}  // namespace ordemb
