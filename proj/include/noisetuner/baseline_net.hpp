#ifndef NOISETUNER_BASELINE_NET_HPP_
#define NOISETUNER_BASELINE_NET_HPP_

#include <cstdint>
#include <vector>

#include "noisetuner/adamw.hpp"
#include "noisetuner/policy.hpp"

namespace noisetuner {

// How policy parameters are encoded as network input.
//   kFullParams:   concat(mu, log_sigma), width 2*dim. Fine at desk scale.
//   kSummaryStats: per-tensor mean/std/min/max of mu and log_sigma, width 8.
//                  For large dim where flattening is impractical.
enum class BaselineInput {
  kFullParams,
  kSummaryStats,
};

// Online predictor of the current policy's expected reward: a 3-layer MLP
// (input -> hidden -> hidden -> scalar) with rectified-linear hidden
// activations, trained one adaptive-moment step per iteration from that
// iteration's sampled rewards. Single-writer: predict is safe concurrently,
// update must be serialized.
struct BaselineNet {
  BaselineInput input_mode = BaselineInput::kFullParams;
  std::size_t input_width = 0;
  std::size_t hidden_width = 0;

  // Row-major weight matrices and bias vectors.
  std::vector<double> w1, b1;  // hidden x input, hidden
  std::vector<double> w2, b2;  // hidden x hidden, hidden
  std::vector<double> w3, b3;  // 1 x hidden, 1

  OptimState optim;

  std::size_t parameter_count() const;
};

// Per-parameter gradients of the fitting loss, plus the pre-step loss value.
struct BaselineGradients {
  std::vector<double> w1, b1, w2, b2, w3, b3;
  double loss = 0.0;
};

// Uniform init in +/- sqrt(6 / (fan_in + fan_out)) per layer, zero biases.
BaselineNet make_baseline_net(std::size_t policy_dim, std::size_t hidden_width,
                              BaselineInput input_mode, std::uint64_t seed);

// Encodes policy parameters according to the input mode.
std::vector<double> baseline_features(const Policy& policy, BaselineInput mode);

// Forward pass on encoded features. Throws on width mismatch.
double predict(const BaselineNet& net, const std::vector<double>& features);

// Convenience overload encoding the policy first.
double predict(const BaselineNet& net, const Policy& policy);

// Exact backpropagation of the mean-squared fitting loss
//   L = (1/m) sum_k (prediction - reward_k)^2
// with the policy input treated as a constant. Does not modify the net.
BaselineGradients baseline_gradients(const BaselineNet& net, const std::vector<double>& features,
                                     const std::vector<double>& rewards);

// One adaptive-moment step against the fitting loss; returns the pre-step
// loss. Throws std::invalid_argument on empty or non-finite rewards.
double update(BaselineNet& net, const Policy& policy, const std::vector<double>& rewards,
              double lr);

}  // namespace noisetuner

#endif  // NOISETUNER_BASELINE_NET_HPP_
