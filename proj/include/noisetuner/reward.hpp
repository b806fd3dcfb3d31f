#ifndef NOISETUNER_REWARD_HPP_
#define NOISETUNER_REWARD_HPP_

#include <string>
#include <vector>

#include "noisetuner/mixture.hpp"

namespace noisetuner {

enum class RewardKind {
  kNegSquaredDistance,  // -||z_0 - target||^2
  kMixtureLogDensity,   // log p_mixture(z_0)
  kModeIndicator,       // 1 if target component has max responsibility at alpha_bar = 1
  kWeightedSum,
};

// Pluggable deterministic reward over generated outputs, standing in for a
// pretrained scorer. `condition` is the opaque state label this reward is
// bound to.
struct RewardSpec {
  RewardKind kind = RewardKind::kNegSquaredDistance;
  std::string condition;

  std::vector<double> target;  // kNegSquaredDistance

  GaussianMixture mixture;      // kMixtureLogDensity / kModeIndicator
  std::size_t target_component = 0;  // kModeIndicator

  // kWeightedSum members (parallel arrays).
  std::vector<RewardSpec> terms;
  std::vector<double> term_weights;

  // Optional affine normalization applied to the final value; identity by
  // default. Useful when reward scale would destabilize the learned baseline.
  double scale = 1.0;
  double shift = 0.0;

  void validate() const;

  static RewardSpec neg_squared_distance(std::vector<double> target);
  static RewardSpec mixture_log_density_reward(GaussianMixture mixture);
  static RewardSpec mode_indicator(GaussianMixture mixture, std::size_t target_component);
  static RewardSpec weighted_sum(std::vector<RewardSpec> terms, std::vector<double> weights);
};

// Evaluates the reward at a generated output. Pure and deterministic.
// Throws std::invalid_argument on dimension mismatch or non-finite input.
double evaluate(const RewardSpec& spec, const std::vector<double>& z0);

}  // namespace noisetuner

#endif  // NOISETUNER_REWARD_HPP_
