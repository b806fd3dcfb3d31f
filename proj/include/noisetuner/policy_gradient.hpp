#ifndef NOISETUNER_POLICY_GRADIENT_HPP_
#define NOISETUNER_POLICY_GRADIENT_HPP_

#include <vector>

#include "noisetuner/policy.hpp"

namespace noisetuner {

// One rollout: the sampled action, its generated output, the raw and
// calibrated rewards, and the log-density under the sampling-time policy
// (used to form the importance ratio later).
struct SampleRecord {
  Action action;
  std::vector<double> output;
  double reward = 0.0;
  double baseline = 0.0;    // predicted expected reward at sampling time
  double calibrated = 0.0;  // reward - baseline
  double logp_old = 0.0;
  int iteration = 0;
};

// What to do with the importance weight when the ratio leaves the trust
// band [1 - margin, 1 + margin]. kDrop zeroes the sample's contribution
// (the literal reading); kClamp pins the weight to the nearest band edge.
enum class ClipStyle {
  kDrop,
  kClamp,
};

// Importance weight of one sample: eta inside the band, 0 outside.
// An infinite margin disables clipping.
double ratio_clip_weight(double eta, double clip_margin);

double ratio_clip_weight(double eta, double clip_margin, ClipStyle style);

struct PolicyGradientResult {
  std::vector<double> mu;
  std::vector<double> log_sigma;
  double eta_mean = 0.0;       // mean importance ratio across records
  double drop_fraction = 0.0;  // fraction of records clipped to zero weight
};

// Gradient of the clipped surrogate loss with respect to (mu, log_sigma):
// the mean over records of
//   -calibrated * weight(eta) * score(policy, action),
// where eta = ratio of the current policy to the sampling-time policy at the
// recorded action (from logp_old), treated as a constant multiplier. Clipped
// records contribute zero but still count in the denominator, so the
// estimator scale does not drift with the drop rate.
// Throws std::invalid_argument if records is empty.
PolicyGradientResult policy_gradient(const Policy& policy,
                                     const std::vector<SampleRecord>& records,
                                     double clip_margin, RatioMode ratio_mode,
                                     ClipStyle clip_style = ClipStyle::kDrop);

}  // namespace noisetuner

#endif  // NOISETUNER_POLICY_GRADIENT_HPP_
