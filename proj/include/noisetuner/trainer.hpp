#ifndef NOISETUNER_TRAINER_HPP_
#define NOISETUNER_TRAINER_HPP_

#include <cstdint>
#include <deque>
#include <vector>

#include "noisetuner/adamw.hpp"
#include "noisetuner/baseline_net.hpp"
#include "noisetuner/generator.hpp"
#include "noisetuner/policy.hpp"
#include "noisetuner/policy_gradient.hpp"
#include "noisetuner/reward.hpp"

namespace noisetuner {

struct BaselineConfig {
  bool enabled = true;
  std::size_t hidden_width = 64;
  double lr = 1e-3;
  BaselineInput input_mode = BaselineInput::kFullParams;
};

// Optional plateau stop: halt once the Gaussian-smoothed reward has improved
// by less than min_delta over the trailing window.
struct EarlyStopConfig {
  bool enabled = false;
  double min_delta = 1e-3;
  int window = 30;
  int min_iterations = 60;
};

struct TrainConfig {
  std::size_t dim = 1;
  int batch_size = 1;    // samples drawn per iteration
  int total_steps = 150;
  double lr = 0.001;
  double clip_margin = 0.02;  // trust band half-width for the importance ratio
  RatioMode ratio_mode = RatioMode::kPerDimGeoMean;
  ClipStyle clip_style = ClipStyle::kDrop;
  int replay_window = 1;  // batches kept for the update, including the newest
  int inner_epochs = 1;   // policy updates per iteration over that window
  std::uint64_t seed = 0;
  double log_sigma_floor = -10.0;  // keeps densities non-degenerate
  double smooth_sigma = 5.0;       // iterations, for the smoothed trajectory
  AdamwParams adamw;
  BaselineConfig baseline;
  EarlyStopConfig early_stop;
  GeneratorSpec generator;
  RewardSpec reward;

  // Linear-schedule parameters the exact-DDIM generator was built from,
  // kept so configs re-serialize exactly.
  int schedule_steps = 50;
  double schedule_beta_min = 1e-4;
  double schedule_beta_max = 0.02;

  void validate() const;
};

struct IterationMetrics {
  int iteration = 0;
  double reward_mean = 0.0;      // raw batch reward
  double baseline_value = 0.0;   // predicted expected reward before updates
  double calibrated_mean = 0.0;  // reward - baseline, batch mean
  double eta_mean = 1.0;
  double clip_drop_fraction = 0.0;
  double mu_norm = 0.0;     // L2
  double sigma_mean = 0.0;
  double baseline_loss = 0.0;
};

struct TrainState {
  Policy policy;
  BaselineNet net;
  OptimState policy_optim;
  std::deque<std::vector<SampleRecord>> replay;
  int iteration = 0;
};

TrainState make_train_state(const TrainConfig& config);

// One optimization iteration:
//   sample a batch from the policy, run the generator, evaluate rewards,
//   read the baseline prediction, take one baseline fitting step, form
//   calibrated rewards, then update the policy over the replay window for
//   the configured number of inner epochs (recomputing importance ratios
//   each epoch). The logged baseline value is the prediction before either
//   update. Throws std::runtime_error if the policy leaves finite range.
IterationMetrics train_step(TrainState& state, const TrainConfig& config);

struct TrainResult {
  Policy policy;
  BaselineNet net;
  std::vector<IterationMetrics> trajectory;
  bool stopped_early = false;
  int iterations_run = 0;
};

// Runs total_steps iterations (or fewer on plateau stop).
TrainResult run_training(const TrainConfig& config);

// True once the smoothed reward trajectory has stopped improving per the
// config's early-stop settings. `rewards` holds the raw per-iteration batch
// means so far.
bool plateau_reached(const std::vector<double>& rewards, const TrainConfig& config);

// Gaussian-kernel smoothing with edge renormalization; output length equals
// input length. sigma <= 0 returns the input unchanged.
std::vector<double> gaussian_smooth(const std::vector<double>& values, double sigma);

}  // namespace noisetuner

#endif  // NOISETUNER_TRAINER_HPP_
