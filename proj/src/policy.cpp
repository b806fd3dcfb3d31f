#include "noisetuner/policy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace noisetuner {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * ln(2*pi)

void check_dims(const Policy& policy, const Action& action, const char* what) {
  if (policy.mu.size() != policy.log_sigma.size()) {
    throw std::invalid_argument(std::string(what) + ": policy mu/log_sigma length mismatch");
  }
  if (action.z.size() != policy.dim()) {
    throw std::invalid_argument(std::string(what) + ": action dim " +
                                std::to_string(action.z.size()) + " != policy dim " +
                                std::to_string(policy.dim()));
  }
}

}  // namespace

Policy Policy::standard(std::size_t dim) {
  Policy p;
  p.mu.assign(dim, 0.0);
  p.log_sigma.assign(dim, 0.0);
  return p;
}

std::vector<Action> sample(const Policy& policy, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  return sample(policy, count, rng);
}

std::vector<Action> sample(const Policy& policy, std::size_t count, Rng& rng) {
  const std::size_t d = policy.dim();
  std::vector<Action> actions(count);
  for (std::size_t i = 0; i < count; ++i) {
    actions[i].z.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      actions[i].z[j] = policy.mu[j] + std::exp(policy.log_sigma[j]) * rng.next_normal();
    }
  }
  return actions;
}

double log_prob(const Policy& policy, const Action& action) {
  check_dims(policy, action, "log_prob");
  double total = 0.0;
  for (std::size_t j = 0; j < policy.dim(); ++j) {
    const double inv_sigma = std::exp(-policy.log_sigma[j]);
    const double standardized = (action.z[j] - policy.mu[j]) * inv_sigma;
    total += -kHalfLog2Pi - policy.log_sigma[j] - 0.5 * standardized * standardized;
  }
  return total;
}

ScoreGradient score(const Policy& policy, const Action& action) {
  check_dims(policy, action, "score");
  const std::size_t d = policy.dim();
  ScoreGradient grad;
  grad.mu.resize(d);
  grad.log_sigma.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double inv_var = std::exp(-2.0 * policy.log_sigma[j]);
    const double centered = action.z[j] - policy.mu[j];
    grad.mu[j] = centered * inv_var;
    grad.log_sigma[j] = centered * centered * inv_var - 1.0;
  }
  return grad;
}

double ratio_from_log_diff(double log_diff, std::size_t dim, RatioMode mode) {
  if (mode == RatioMode::kPerDimGeoMean && dim > 0) {
    log_diff /= static_cast<double>(dim);
  }
  return std::exp(log_diff);
}

double density_ratio(const Policy& policy_new, const Policy& policy_old,
                     const Action& action, RatioMode mode) {
  if (policy_new.dim() != policy_old.dim()) {
    throw std::invalid_argument("density_ratio: policy dims differ");
  }
  const double log_diff = log_prob(policy_new, action) - log_prob(policy_old, action);
  return ratio_from_log_diff(log_diff, policy_new.dim(), mode);
}

}  // namespace noisetuner
