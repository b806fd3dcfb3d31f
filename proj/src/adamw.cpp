#include "noisetuner/adamw.hpp"

#include <cmath>
#include <stdexcept>

namespace noisetuner {

OptimState OptimState::zeros(std::size_t size, AdamwParams hyper) {
  OptimState state;
  state.m1.assign(size, 0.0);
  state.m2.assign(size, 0.0);
  state.hyper = hyper;
  return state;
}

void adamw_step(std::vector<double>& params, const std::vector<double>& grad,
                OptimState& state, double lr) {
  if (params.size() != grad.size() || params.size() != state.m1.size() ||
      params.size() != state.m2.size()) {
    throw std::invalid_argument("adamw_step: parameter/gradient/state shape mismatch");
  }
  for (double g : grad) {
    if (!std::isfinite(g)) {
      throw std::invalid_argument("adamw_step: non-finite gradient");
    }
  }
  const AdamwParams& h = state.hyper;
  state.step_count += 1;
  const double bias1 = 1.0 - std::pow(h.beta1, static_cast<double>(state.step_count));
  const double bias2 = 1.0 - std::pow(h.beta2, static_cast<double>(state.step_count));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m1[i] = h.beta1 * state.m1[i] + (1.0 - h.beta1) * grad[i];
    state.m2[i] = h.beta2 * state.m2[i] + (1.0 - h.beta2) * grad[i] * grad[i];
    const double m_hat = state.m1[i] / bias1;
    const double v_hat = state.m2[i] / bias2;
    params[i] -= lr * (m_hat / (std::sqrt(v_hat) + h.eps) + h.weight_decay * params[i]);
  }
}

}  // namespace noisetuner
