#include "noisetuner/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace noisetuner {

namespace {

double evaluate_raw(const RewardSpec& spec, const std::vector<double>& z0) {
  switch (spec.kind) {
    case RewardKind::kNegSquaredDistance: {
      if (z0.size() != spec.target.size()) {
        throw std::invalid_argument("evaluate: output dim != target dim");
      }
      double dist2 = 0.0;
      for (std::size_t j = 0; j < z0.size(); ++j) {
        const double diff = z0[j] - spec.target[j];
        dist2 += diff * diff;
      }
      return -dist2;
    }
    case RewardKind::kMixtureLogDensity:
      return mixture_log_density(spec.mixture, z0);
    case RewardKind::kModeIndicator: {
      const std::vector<double> gamma = responsibilities(spec.mixture, z0, 1.0);
      const std::size_t argmax =
          static_cast<std::size_t>(std::max_element(gamma.begin(), gamma.end()) - gamma.begin());
      return argmax == spec.target_component ? 1.0 : 0.0;
    }
    case RewardKind::kWeightedSum: {
      double total = 0.0;
      for (std::size_t i = 0; i < spec.terms.size(); ++i) {
        total += spec.term_weights[i] * evaluate_raw(spec.terms[i], z0);
      }
      return total;
    }
  }
  throw std::logic_error("evaluate: unknown reward kind");
}

}  // namespace

void RewardSpec::validate() const {
  if (!(std::isfinite(scale) && std::isfinite(shift))) {
    throw std::invalid_argument("RewardSpec: scale/shift must be finite");
  }
  switch (kind) {
    case RewardKind::kNegSquaredDistance:
      if (target.empty()) {
        throw std::invalid_argument("RewardSpec: neg_sq_dist needs a target vector");
      }
      break;
    case RewardKind::kMixtureLogDensity:
      mixture.validate();
      break;
    case RewardKind::kModeIndicator:
      mixture.validate();
      if (target_component >= mixture.component_count()) {
        throw std::invalid_argument("RewardSpec: target component index out of range");
      }
      break;
    case RewardKind::kWeightedSum:
      if (terms.size() != term_weights.size() || terms.empty()) {
        throw std::invalid_argument("RewardSpec: weighted_sum terms/weights mismatch");
      }
      for (double w : term_weights) {
        if (!std::isfinite(w)) {
          throw std::invalid_argument("RewardSpec: weighted_sum weight not finite");
        }
      }
      for (const RewardSpec& term : terms) {
        term.validate();
      }
      break;
  }
}

RewardSpec RewardSpec::neg_squared_distance(std::vector<double> target) {
  RewardSpec spec;
  spec.kind = RewardKind::kNegSquaredDistance;
  spec.target = std::move(target);
  spec.validate();
  return spec;
}

RewardSpec RewardSpec::mixture_log_density_reward(GaussianMixture mixture) {
  RewardSpec spec;
  spec.kind = RewardKind::kMixtureLogDensity;
  spec.mixture = std::move(mixture);
  spec.validate();
  return spec;
}

RewardSpec RewardSpec::mode_indicator(GaussianMixture mixture, std::size_t target_component) {
  RewardSpec spec;
  spec.kind = RewardKind::kModeIndicator;
  spec.mixture = std::move(mixture);
  spec.target_component = target_component;
  spec.validate();
  return spec;
}

RewardSpec RewardSpec::weighted_sum(std::vector<RewardSpec> terms, std::vector<double> weights) {
  RewardSpec spec;
  spec.kind = RewardKind::kWeightedSum;
  spec.terms = std::move(terms);
  spec.term_weights = std::move(weights);
  spec.validate();
  return spec;
}

double evaluate(const RewardSpec& spec, const std::vector<double>& z0) {
  for (double value : z0) {
    if (!std::isfinite(value)) {
      throw std::invalid_argument("evaluate: non-finite output value");
    }
  }
  return spec.scale * evaluate_raw(spec, z0) + spec.shift;
}

}  // namespace noisetuner
