#ifndef NOISETUNER_POLICY_HPP_
#define NOISETUNER_POLICY_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "noisetuner/rng.hpp"

namespace noisetuner {

// How the density ratio between two policies is reported.
//
// kFull is the raw joint-density ratio. At high dimension it under/overflows
// for any two distinct Gaussians, so kPerDimGeoMean (the per-dimension
// geometric mean of the joint ratio) is the default; the two coincide at
// dim == 1.
enum class RatioMode {
  kFull,
  kPerDimGeoMean,
};

// Trainable diagonal Gaussian over initial noise. Element j of a draw is
// distributed N(mu[j], exp(log_sigma[j])^2). Values are treated as immutable
// once built; updates construct new instances.
struct Policy {
  std::vector<double> mu;
  std::vector<double> log_sigma;

  std::size_t dim() const { return mu.size(); }

  // N(0, I) in `dim` dimensions, the canonical starting point.
  static Policy standard(std::size_t dim);
};

// One sampled initial-noise vector.
struct Action {
  std::vector<double> z;
};

struct ScoreGradient {
  std::vector<double> mu;
  std::vector<double> log_sigma;
};

// Draws `count` i.i.d. actions. Deterministic given the seed.
std::vector<Action> sample(const Policy& policy, std::size_t count, std::uint64_t seed);

// Same, drawing from an existing stream.
std::vector<Action> sample(const Policy& policy, std::size_t count, Rng& rng);

// Exact joint log-density of `action` under `policy`.
// Throws std::invalid_argument on dimension mismatch.
double log_prob(const Policy& policy, const Action& action);

// Analytic gradient of log_prob with respect to (mu, log_sigma):
//   d/dmu_j        = (z_j - mu_j) / sigma_j^2
//   d/dlog_sigma_j = (z_j - mu_j)^2 / sigma_j^2 - 1
ScoreGradient score(const Policy& policy, const Action& action);

// Ratio of new-policy to old-policy density at `action`; strictly positive.
double density_ratio(const Policy& policy_new, const Policy& policy_old,
                     const Action& action, RatioMode mode);

// Converts a log-density difference into a ratio under the given mode.
double ratio_from_log_diff(double log_diff, std::size_t dim, RatioMode mode);

}  // namespace noisetuner

#endif  // NOISETUNER_POLICY_HPP_
