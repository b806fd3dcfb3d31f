#include "noisetuner/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace noisetuner {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

void check_alpha_bar(double alpha_bar_t, const char* what) {
  if (!(alpha_bar_t > 0.0 && alpha_bar_t <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": alpha_bar_t must be in (0, 1]");
  }
}

void check_observation(const GaussianMixture& mixture, const std::vector<double>& z,
                       const char* what) {
  if (z.size() != mixture.dim()) {
    throw std::invalid_argument(std::string(what) + ": observation dim " +
                                std::to_string(z.size()) + " != mixture dim " +
                                std::to_string(mixture.dim()));
  }
}

// Log-density of z under N(mean_scale*m_k, var_scale*s_k^2 + var_offset).
double component_log_density(const GaussianMixture& mixture, std::size_t k,
                             const std::vector<double>& z, double mean_scale,
                             double var_scale, double var_offset) {
  double total = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double s = mixture.stds[k][j];
    const double var = var_scale * s * s + var_offset;
    const double centered = z[j] - mean_scale * mixture.means[k][j];
    total += -kHalfLog2Pi - 0.5 * std::log(var) - 0.5 * centered * centered / var;
  }
  return total;
}

std::vector<double> noised_responsibilities(const GaussianMixture& mixture,
                                            const std::vector<double>& z_t,
                                            double alpha_bar_t) {
  const std::size_t count = mixture.component_count();
  const double mean_scale = std::sqrt(alpha_bar_t);
  std::vector<double> log_terms(count);
  double max_term = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    log_terms[k] = std::log(mixture.weights[k]) +
                   component_log_density(mixture, k, z_t, mean_scale, alpha_bar_t,
                                         1.0 - alpha_bar_t);
    max_term = std::max(max_term, log_terms[k]);
  }
  double normalizer = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    log_terms[k] = std::exp(log_terms[k] - max_term);
    normalizer += log_terms[k];
  }
  for (double& term : log_terms) {
    term /= normalizer;
  }
  return log_terms;
}

}  // namespace

void GaussianMixture::validate() const {
  const std::size_t count = weights.size();
  if (count == 0) {
    throw std::invalid_argument("GaussianMixture: no components");
  }
  if (means.size() != count || stds.size() != count) {
    throw std::invalid_argument("GaussianMixture: weights/means/stds count mismatch");
  }
  const std::size_t d = means[0].size();
  double weight_sum = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    if (weights[k] < 0.0) {
      throw std::invalid_argument("GaussianMixture: negative weight at component " +
                                  std::to_string(k));
    }
    weight_sum += weights[k];
    if (means[k].size() != d || stds[k].size() != d) {
      throw std::invalid_argument("GaussianMixture: component " + std::to_string(k) +
                                  " dim mismatch");
    }
    for (double s : stds[k]) {
      if (!(s > 0.0)) {
        throw std::invalid_argument("GaussianMixture: stds must be strictly positive");
      }
    }
  }
  if (std::abs(weight_sum - 1.0) > 1e-12) {
    throw std::invalid_argument("GaussianMixture: weights sum to " +
                                std::to_string(weight_sum) + ", expected 1");
  }
}

GaussianMixture GaussianMixture::isotropic(const std::vector<double>& weights,
                                           const std::vector<std::vector<double>>& means,
                                           double std_dev) {
  GaussianMixture mixture;
  mixture.weights = weights;
  mixture.means = means;
  mixture.stds.reserve(means.size());
  for (const auto& mean : means) {
    mixture.stds.emplace_back(mean.size(), std_dev);
  }
  mixture.validate();
  return mixture;
}

std::vector<double> responsibilities(const GaussianMixture& mixture,
                                     const std::vector<double>& z_t, double alpha_bar_t) {
  check_alpha_bar(alpha_bar_t, "responsibilities");
  check_observation(mixture, z_t, "responsibilities");
  return noised_responsibilities(mixture, z_t, alpha_bar_t);
}

std::vector<double> posterior_mean(const GaussianMixture& mixture,
                                   const std::vector<double>& z_t, double alpha_bar_t) {
  check_alpha_bar(alpha_bar_t, "posterior_mean");
  check_observation(mixture, z_t, "posterior_mean");
  const std::vector<double> gamma = noised_responsibilities(mixture, z_t, alpha_bar_t);
  const double mean_scale = std::sqrt(alpha_bar_t);
  std::vector<double> mean(z_t.size(), 0.0);
  for (std::size_t k = 0; k < mixture.component_count(); ++k) {
    for (std::size_t j = 0; j < z_t.size(); ++j) {
      const double m = mixture.means[k][j];
      const double s = mixture.stds[k][j];
      const double gain = mean_scale * s * s / (alpha_bar_t * s * s + 1.0 - alpha_bar_t);
      mean[j] += gamma[k] * (m + gain * (z_t[j] - mean_scale * m));
    }
  }
  return mean;
}

double mixture_log_density(const GaussianMixture& mixture, const std::vector<double>& z) {
  check_observation(mixture, z, "mixture_log_density");
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> log_terms(mixture.component_count());
  for (std::size_t k = 0; k < mixture.component_count(); ++k) {
    log_terms[k] = std::log(mixture.weights[k]) +
                   component_log_density(mixture, k, z, 1.0, 1.0, 0.0);
    max_term = std::max(max_term, log_terms[k]);
  }
  double sum = 0.0;
  for (double term : log_terms) {
    sum += std::exp(term - max_term);
  }
  return max_term + std::log(sum);
}

std::vector<double> sample_component(const GaussianMixture& mixture, std::size_t k, Rng& rng) {
  if (k >= mixture.component_count()) {
    throw std::invalid_argument("sample_component: component index out of range");
  }
  std::vector<double> z(mixture.dim());
  for (std::size_t j = 0; j < z.size(); ++j) {
    z[j] = mixture.means[k][j] + mixture.stds[k][j] * rng.next_normal();
  }
  return z;
}

}  // namespace noisetuner
