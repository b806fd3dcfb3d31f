#include "noisetuner/policy_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace noisetuner {

double ratio_clip_weight(double eta, double clip_margin) {
  return ratio_clip_weight(eta, clip_margin, ClipStyle::kDrop);
}

double ratio_clip_weight(double eta, double clip_margin, ClipStyle style) {
  if (!(eta > 0.0)) {
    throw std::invalid_argument("ratio_clip_weight: eta must be strictly positive");
  }
  if (!(clip_margin > 0.0)) {
    throw std::invalid_argument("ratio_clip_weight: clip margin must be strictly positive");
  }
  if (std::isinf(clip_margin)) {
    return eta;
  }
  const double lo = 1.0 - clip_margin;
  const double hi = 1.0 + clip_margin;
  if (eta >= lo && eta <= hi) {
    return eta;
  }
  return style == ClipStyle::kDrop ? 0.0 : std::clamp(eta, std::max(lo, 0.0), hi);
}

PolicyGradientResult policy_gradient(const Policy& policy,
                                     const std::vector<SampleRecord>& records,
                                     double clip_margin, RatioMode ratio_mode,
                                     ClipStyle clip_style) {
  if (records.empty()) {
    throw std::invalid_argument("policy_gradient: empty record list");
  }
  const std::size_t d = policy.dim();
  PolicyGradientResult result;
  result.mu.assign(d, 0.0);
  result.log_sigma.assign(d, 0.0);

  double eta_sum = 0.0;
  std::size_t dropped = 0;
  for (const SampleRecord& record : records) {
    const double log_diff = log_prob(policy, record.action) - record.logp_old;
    const double eta = ratio_from_log_diff(log_diff, d, ratio_mode);
    eta_sum += eta;
    const double weight = ratio_clip_weight(eta, clip_margin, clip_style);
    if (weight == 0.0) {
      ++dropped;
      continue;
    }
    const ScoreGradient s = score(policy, record.action);
    const double coeff = -record.calibrated * weight;
    for (std::size_t j = 0; j < d; ++j) {
      result.mu[j] += coeff * s.mu[j];
      result.log_sigma[j] += coeff * s.log_sigma[j];
    }
  }
  const double n = static_cast<double>(records.size());
  for (std::size_t j = 0; j < d; ++j) {
    result.mu[j] /= n;
    result.log_sigma[j] /= n;
  }
  result.eta_mean = eta_sum / n;
  result.drop_fraction = static_cast<double>(dropped) / n;
  return result;
}

}  // namespace noisetuner
