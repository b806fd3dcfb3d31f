#include "noisetuner/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace noisetuner {

void NoiseSchedule::validate() const {
  if (alpha_bar.size() < 2) {
    throw std::invalid_argument("NoiseSchedule: needs at least one step");
  }
  if (alpha_bar[0] != 1.0) {
    throw std::invalid_argument("NoiseSchedule: alpha_bar[0] must be exactly 1");
  }
  for (std::size_t t = 1; t < alpha_bar.size(); ++t) {
    if (!(alpha_bar[t] > 0.0 && alpha_bar[t] <= 1.0)) {
      throw std::invalid_argument("NoiseSchedule: alpha_bar[" + std::to_string(t) +
                                  "] outside (0, 1]");
    }
    if (!(alpha_bar[t] < alpha_bar[t - 1])) {
      throw std::invalid_argument("NoiseSchedule: alpha_bar not strictly decreasing at t=" +
                                  std::to_string(t));
    }
  }
}

NoiseSchedule make_linear_schedule(int steps, double beta_min, double beta_max) {
  if (steps < 1) {
    throw std::invalid_argument("make_linear_schedule: steps must be >= 1");
  }
  if (!(beta_min > 0.0 && beta_min <= beta_max && beta_max < 1.0)) {
    throw std::invalid_argument("make_linear_schedule: need 0 < beta_min <= beta_max < 1");
  }
  NoiseSchedule schedule;
  schedule.alpha_bar.resize(static_cast<std::size_t>(steps) + 1);
  schedule.alpha_bar[0] = 1.0;
  double product = 1.0;
  for (int t = 1; t <= steps; ++t) {
    const double frac = steps > 1 ? static_cast<double>(t - 1) / (steps - 1) : 0.0;
    const double beta = beta_min + (beta_max - beta_min) * frac;
    product *= 1.0 - beta;
    schedule.alpha_bar[static_cast<std::size_t>(t)] = product;
  }
  schedule.validate();
  return schedule;
}

}  // namespace noisetuner
