#include "noisetuner/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace noisetuner {

namespace {

constexpr std::uint64_t kOracleStream = 0x6f7261636cULL;

void check_n(int n, const char* what) {
  if (n < 2) {
    throw std::invalid_argument(std::string(what) + ": need n >= 2");
  }
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

McEstimate mc_estimate_from_samples(const std::vector<double>& samples) {
  McEstimate estimate;
  estimate.n = static_cast<int>(samples.size());
  if (samples.empty()) return estimate;
  estimate.mean = pairwise_sum(samples) / static_cast<double>(samples.size());
  if (samples.size() < 2) return estimate;
  std::vector<double> squared(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double centered = samples[i] - estimate.mean;
    squared[i] = centered * centered;
  }
  const double variance =
      pairwise_sum(squared) / static_cast<double>(samples.size() - 1);
  estimate.std_error = std::sqrt(variance / static_cast<double>(samples.size()));
  return estimate;
}

McEstimate expected_reward(const Policy& policy, const GeneratorSpec& generator,
                           const RewardSpec& reward, int n, std::uint64_t seed) {
  check_n(n, "expected_reward");
  Rng rng(mix_seed(seed, kOracleStream));
  std::vector<double> rewards(static_cast<std::size_t>(n));
  const std::vector<Action> actions = sample(policy, static_cast<std::size_t>(n), rng);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    rewards[i] = evaluate(reward, generate(generator, actions[i]));
  }
  return mc_estimate_from_samples(rewards);
}

ObjectiveGradientEstimate fd_objective_gradient(const Policy& policy,
                                                const GeneratorSpec& generator,
                                                const RewardSpec& reward, int n, double h,
                                                std::uint64_t seed) {
  check_n(n, "fd_objective_gradient");
  if (!(h > 0.0)) {
    throw std::invalid_argument("fd_objective_gradient: h must be positive");
  }
  const std::size_t d = policy.dim();
  const std::size_t samples = static_cast<std::size_t>(n);

  // Shared standard-normal draws: the common random numbers across all
  // +/- h evaluations.
  Rng rng(mix_seed(seed, kOracleStream));
  std::vector<double> noise(samples * d);
  for (double& e : noise) e = rng.next_normal();

  auto reward_at = [&](const Policy& theta, std::size_t sample_index) {
    Action action;
    action.z.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      action.z[j] =
          theta.mu[j] + std::exp(theta.log_sigma[j]) * noise[sample_index * d + j];
    }
    return evaluate(reward, generate(generator, action));
  };

  ObjectiveGradientEstimate estimate;
  estimate.mu.resize(d);
  estimate.log_sigma.resize(d);
  estimate.mu_std_error.resize(d);
  estimate.log_sigma_std_error.resize(d);

  std::vector<double> diffs(samples);
  for (std::size_t j = 0; j < 2 * d; ++j) {
    Policy plus = policy;
    Policy minus = policy;
    if (j < d) {
      plus.mu[j] += h;
      minus.mu[j] -= h;
    } else {
      plus.log_sigma[j - d] += h;
      minus.log_sigma[j - d] -= h;
    }
    for (std::size_t i = 0; i < samples; ++i) {
      diffs[i] = (reward_at(plus, i) - reward_at(minus, i)) / (2.0 * h);
    }
    const McEstimate component = mc_estimate_from_samples(diffs);
    if (j < d) {
      estimate.mu[j] = component.mean;
      estimate.mu_std_error[j] = component.std_error;
    } else {
      estimate.log_sigma[j - d] = component.mean;
      estimate.log_sigma_std_error[j - d] = component.std_error;
    }
  }
  return estimate;
}

McEstimate mode_hit_rate(const Policy& policy, const GeneratorSpec& generator,
                         const GaussianMixture& mixture, std::size_t target_component, int n,
                         std::uint64_t seed) {
  check_n(n, "mode_hit_rate");
  if (target_component >= mixture.component_count()) {
    throw std::invalid_argument("mode_hit_rate: target component out of range");
  }
  Rng rng(mix_seed(seed, kOracleStream));
  const std::vector<Action> actions = sample(policy, static_cast<std::size_t>(n), rng);
  std::vector<double> hits(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::vector<double> z0 = generate(generator, actions[i]);
    const std::vector<double> gamma = responsibilities(mixture, z0, 1.0);
    const std::size_t argmax =
        static_cast<std::size_t>(std::max_element(gamma.begin(), gamma.end()) - gamma.begin());
    hits[i] = argmax == target_component ? 1.0 : 0.0;
  }
  return mc_estimate_from_samples(hits);
}

McEstimate mean_output_log_density(const Policy& policy, const GeneratorSpec& generator,
                                   const GaussianMixture& mixture, int n, std::uint64_t seed) {
  check_n(n, "mean_output_log_density");
  Rng rng(mix_seed(seed, kOracleStream));
  const std::vector<Action> actions = sample(policy, static_cast<std::size_t>(n), rng);
  std::vector<double> densities(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    densities[i] = mixture_log_density(mixture, generate(generator, actions[i]));
  }
  return mc_estimate_from_samples(densities);
}

McEstimate component_log_density_level(const GaussianMixture& mixture,
                                       std::size_t component, int n, std::uint64_t seed) {
  check_n(n, "component_log_density_level");
  Rng rng(mix_seed(seed, kOracleStream));
  std::vector<double> densities(static_cast<std::size_t>(n));
  for (double& value : densities) {
    value = mixture_log_density(mixture, sample_component(mixture, component, rng));
  }
  return mc_estimate_from_samples(densities);
}

}  // namespace noisetuner
