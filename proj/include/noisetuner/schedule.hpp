#ifndef NOISETUNER_SCHEDULE_HPP_
#define NOISETUNER_SCHEDULE_HPP_

#include <vector>

namespace noisetuner {

// Cumulative signal coefficients of the forward noising process.
// alpha_bar[t] for t = 0..T, with alpha_bar[0] == 1 exactly, strictly
// decreasing, all entries in (0, 1].
struct NoiseSchedule {
  std::vector<double> alpha_bar;

  int steps() const { return static_cast<int>(alpha_bar.size()) - 1; }

  // Throws std::invalid_argument if the invariants above are violated.
  void validate() const;
};

// Linear beta schedule: beta_t evenly spaced in [beta_min, beta_max] for
// t = 1..steps, alpha_bar_t = prod(1 - beta_i).
NoiseSchedule make_linear_schedule(int steps, double beta_min = 1e-4, double beta_max = 0.02);

}  // namespace noisetuner

#endif  // NOISETUNER_SCHEDULE_HPP_
