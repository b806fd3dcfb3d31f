#ifndef NOISETUNER_ADAMW_HPP_
#define NOISETUNER_ADAMW_HPP_

#include <cstdint>
#include <vector>

namespace noisetuner {

struct AdamwParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

// Adaptive-moment accumulators for one parameter vector.
struct OptimState {
  std::vector<double> m1;
  std::vector<double> m2;
  std::int64_t step_count = 0;
  AdamwParams hyper;

  static OptimState zeros(std::size_t size, AdamwParams hyper = {});
};

// One adaptive-moment update with decoupled weight decay:
//   p <- p - lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * p),
// with bias-corrected moments. Increments state.step_count.
// Throws std::invalid_argument on shape mismatch or non-finite gradient.
void adamw_step(std::vector<double>& params, const std::vector<double>& grad,
                OptimState& state, double lr);

}  // namespace noisetuner

#endif  // NOISETUNER_ADAMW_HPP_
