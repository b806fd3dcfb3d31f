#ifndef NOISETUNER_ORACLE_HPP_
#define NOISETUNER_ORACLE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "noisetuner/generator.hpp"
#include "noisetuner/policy.hpp"
#include "noisetuner/reward.hpp"

namespace noisetuner {

// Brute-force estimators used to verify the optimizer from the outside.
// All of them are deterministic given the seed and reduce in a fixed order,
// so repeated runs agree exactly.

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int n = 0;
};

// Fixed-order pairwise summation (better rounding than a left fold).
double pairwise_sum(std::span<const double> values);

McEstimate mc_estimate_from_samples(const std::vector<double>& samples);

// Sample mean and standard error of the reward over n rollouts from the
// policy through the generator. Requires n >= 2.
McEstimate expected_reward(const Policy& policy, const GeneratorSpec& generator,
                           const RewardSpec& reward, int n, std::uint64_t seed);

struct ObjectiveGradientEstimate {
  std::vector<double> mu;
  std::vector<double> log_sigma;
  std::vector<double> mu_std_error;
  std::vector<double> log_sigma_std_error;
};

// Central finite differences of the expected reward in each policy
// coordinate, using common random numbers: the same standard-normal draws
// are reused at theta +/- h so the Monte-Carlo noise cancels in the
// difference. Standard errors are those of the paired per-sample
// differences.
ObjectiveGradientEstimate fd_objective_gradient(const Policy& policy,
                                                const GeneratorSpec& generator,
                                                const RewardSpec& reward, int n, double h,
                                                std::uint64_t seed);

// Fraction of n rollouts whose output has maximum responsibility at
// `target_component` under the clean mixture.
McEstimate mode_hit_rate(const Policy& policy, const GeneratorSpec& generator,
                         const GaussianMixture& mixture, std::size_t target_component, int n,
                         std::uint64_t seed);

// Mean mixture log-density of generator outputs over n rollouts.
McEstimate mean_output_log_density(const Policy& policy, const GeneratorSpec& generator,
                                   const GaussianMixture& mixture, int n, std::uint64_t seed);

// Mean mixture log-density of draws from one mixture component (the
// reference level for "steering without quality collapse" checks).
McEstimate component_log_density_level(const GaussianMixture& mixture,
                                       std::size_t component, int n, std::uint64_t seed);

}  // namespace noisetuner

#endif  // NOISETUNER_ORACLE_HPP_
