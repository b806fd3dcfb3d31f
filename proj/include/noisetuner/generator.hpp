#ifndef NOISETUNER_GENERATOR_HPP_
#define NOISETUNER_GENERATOR_HPP_

#include <string>
#include <vector>

#include "noisetuner/mixture.hpp"
#include "noisetuner/policy.hpp"
#include "noisetuner/schedule.hpp"

namespace noisetuner {

enum class GeneratorKind {
  kIdentity,
  kLinear,
  kExactDdim,
};

// Deterministic black-box generator mapping initial noise z_T to an output
// z_0. The reverse chain is treated as an opaque environment: same input,
// same output, bit for bit.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kIdentity;
  std::size_t dim = 0;

  // Opaque condition label (the MDP state) carried through to rewards.
  std::string condition;

  // kLinear: z_0 = A z_T + b, with A row-major dim x dim.
  std::vector<double> matrix;
  std::vector<double> offset;

  // kExactDdim: reverse chain over the mixture with the given schedule,
  // visiting t = T, T-stride, ..., 0. stride must divide T evenly.
  GaussianMixture mixture;
  NoiseSchedule schedule;
  int stride = 1;

  void validate() const;

  static GeneratorSpec identity(std::size_t dim);
  static GeneratorSpec linear(std::vector<double> matrix, std::vector<double> offset);
  static GeneratorSpec exact_ddim(GaussianMixture mixture, NoiseSchedule schedule, int stride = 1);
};

// The deterministic reverse update (noise variance pinned to zero):
//   z_prev = sqrt(ab_prev) * z0_hat
//          + sqrt(1 - ab_prev) * (z_t - sqrt(ab_t) * z0_hat) / sqrt(1 - ab_t).
// Requires alpha_bar_t < 1.
std::vector<double> ddim_update(const std::vector<double>& z_t,
                                const std::vector<double>& z0_hat, double alpha_bar_t,
                                double alpha_bar_prev);

// One reverse step t -> t_prev using the exact mixture posterior mean as the
// denoiser. Requires 0 <= t_prev < t <= schedule.steps().
std::vector<double> ddim_step(const GaussianMixture& mixture, const NoiseSchedule& schedule,
                              const std::vector<double>& z_t, int t, int t_prev);

// Runs the generator on one action. Pure function of (spec, z_T).
std::vector<double> generate(const GeneratorSpec& spec, const Action& z_T);

}  // namespace noisetuner

#endif  // NOISETUNER_GENERATOR_HPP_
