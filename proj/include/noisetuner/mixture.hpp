#ifndef NOISETUNER_MIXTURE_HPP_
#define NOISETUNER_MIXTURE_HPP_

#include <cstddef>
#include <vector>

#include "noisetuner/rng.hpp"

namespace noisetuner {

// Weighted mixture of axis-aligned Gaussians. Serves as the toy data
// distribution whose posterior mean is available in closed form, so the
// reverse diffusion chain needs no learned denoiser.
struct GaussianMixture {
  std::vector<double> weights;             // K, nonnegative, sums to 1
  std::vector<std::vector<double>> means;  // K x d
  std::vector<std::vector<double>> stds;   // K x d, strictly positive

  std::size_t component_count() const { return weights.size(); }
  std::size_t dim() const { return means.empty() ? 0 : means[0].size(); }

  // Throws std::invalid_argument on inconsistent shapes, negative weights,
  // weights not summing to 1 within 1e-12, or non-positive stds.
  void validate() const;

  // Convenience: all components share a scalar mean/std per dimension.
  static GaussianMixture isotropic(const std::vector<double>& weights,
                                   const std::vector<std::vector<double>>& means,
                                   double std_dev);
};

// Posterior component probabilities given a noised observation z_t produced
// with cumulative signal level alpha_bar_t:
//   gamma_k proportional to w_k * N(z_t; sqrt(ab)*m_k, ab*s_k^2 + (1-ab)*I).
// Computed in log space with max subtraction. Sums to 1.
std::vector<double> responsibilities(const GaussianMixture& mixture,
                                     const std::vector<double>& z_t, double alpha_bar_t);

// Exact E[z_0 | z_t] under the forward noising process. Per dimension of a
// single component:
//   z0_hat = m + (sqrt(ab) s^2 / (ab s^2 + 1 - ab)) * (z_t - sqrt(ab) m),
// combined across components with the responsibilities above.
std::vector<double> posterior_mean(const GaussianMixture& mixture,
                                   const std::vector<double>& z_t, double alpha_bar_t);

// log p(z) under the clean mixture (alpha_bar = 1).
double mixture_log_density(const GaussianMixture& mixture, const std::vector<double>& z);

// Draws from a single component (oracle/evaluation use).
std::vector<double> sample_component(const GaussianMixture& mixture, std::size_t k, Rng& rng);

}  // namespace noisetuner

#endif  // NOISETUNER_MIXTURE_HPP_
