#include "noisetuner/trainer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "noisetuner/log.hpp"

namespace noisetuner {

namespace {

constexpr std::uint64_t kRolloutStream = 0x726f6c6cULL;   // rollout noise
constexpr std::uint64_t kNetInitStream = 0x6e657469ULL;   // baseline net init

double l2_norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

void check_policy_finite(const Policy& policy, int iteration) {
  for (double x : policy.mu) {
    if (!std::isfinite(x)) {
      throw std::runtime_error("train_step: non-finite policy mean at iteration " +
                               std::to_string(iteration));
    }
  }
  for (double x : policy.log_sigma) {
    if (!std::isfinite(x)) {
      throw std::runtime_error("train_step: non-finite policy log-sigma at iteration " +
                               std::to_string(iteration));
    }
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (dim == 0) throw std::invalid_argument("TrainConfig: dim must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (total_steps < 0) throw std::invalid_argument("TrainConfig: total_steps must be >= 0");
  if (!(lr > 0.0)) throw std::invalid_argument("TrainConfig: lr must be positive");
  if (!(clip_margin > 0.0)) {
    throw std::invalid_argument("TrainConfig: clip_margin must be positive");
  }
  if (replay_window < 1) throw std::invalid_argument("TrainConfig: replay_window must be >= 1");
  if (inner_epochs < 1) throw std::invalid_argument("TrainConfig: inner_epochs must be >= 1");
  if (baseline.enabled) {
    if (baseline.hidden_width == 0) {
      throw std::invalid_argument("TrainConfig: baseline hidden width must be >= 1");
    }
    if (!(baseline.lr > 0.0)) {
      throw std::invalid_argument("TrainConfig: baseline lr must be positive");
    }
  }
  if (early_stop.enabled && early_stop.window < 1) {
    throw std::invalid_argument("TrainConfig: early-stop window must be >= 1");
  }
  generator.validate();
  reward.validate();
  if (generator.dim != dim) {
    throw std::invalid_argument("TrainConfig: generator dim != policy dim");
  }
}

TrainState make_train_state(const TrainConfig& config) {
  config.validate();
  TrainState state;
  state.policy = Policy::standard(config.dim);
  state.net = make_baseline_net(config.dim,
                                config.baseline.enabled ? config.baseline.hidden_width : 1,
                                config.baseline.input_mode,
                                mix_seed(config.seed, kNetInitStream));
  state.policy_optim = OptimState::zeros(2 * config.dim, config.adamw);
  return state;
}

IterationMetrics train_step(TrainState& state, const TrainConfig& config) {
  const std::size_t d = config.dim;
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);

  Rng rng(mix_seed(mix_seed(config.seed, kRolloutStream),
                   static_cast<std::uint64_t>(state.iteration)));
  const std::vector<Action> actions = sample(state.policy, batch, rng);

  std::vector<double> rewards(batch);
  std::vector<SampleRecord> records(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    records[i].action = actions[i];
    records[i].output = generate(config.generator, actions[i]);
    rewards[i] = evaluate(config.reward, records[i].output);
    records[i].reward = rewards[i];
    records[i].logp_old = log_prob(state.policy, actions[i]);
    records[i].iteration = state.iteration;
  }

  // Baseline prediction under the pre-update policy, then one fitting step
  // against this batch's rewards. The prediction is what calibrates the
  // batch; the fitting step only affects later iterations.
  const double baseline_value =
      config.baseline.enabled ? predict(state.net, state.policy) : 0.0;
  const double baseline_loss =
      config.baseline.enabled ? update(state.net, state.policy, rewards, config.baseline.lr)
                              : 0.0;

  double reward_sum = 0.0;
  for (std::size_t i = 0; i < batch; ++i) {
    records[i].baseline = baseline_value;
    records[i].calibrated = records[i].reward - baseline_value;
    reward_sum += records[i].reward;
  }

  state.replay.push_back(std::move(records));
  while (static_cast<int>(state.replay.size()) > config.replay_window) {
    state.replay.pop_front();
  }
  std::vector<SampleRecord> window;
  for (const auto& records_batch : state.replay) {
    window.insert(window.end(), records_batch.begin(), records_batch.end());
  }

  double eta_sum = 0.0;
  double drop_sum = 0.0;
  for (int epoch = 0; epoch < config.inner_epochs; ++epoch) {
    const PolicyGradientResult grad = policy_gradient(state.policy, window, config.clip_margin,
                                                      config.ratio_mode, config.clip_style);
    eta_sum += grad.eta_mean;
    drop_sum += grad.drop_fraction;

    std::vector<double> params;
    params.reserve(2 * d);
    params.insert(params.end(), state.policy.mu.begin(), state.policy.mu.end());
    params.insert(params.end(), state.policy.log_sigma.begin(), state.policy.log_sigma.end());
    std::vector<double> gradient;
    gradient.reserve(2 * d);
    gradient.insert(gradient.end(), grad.mu.begin(), grad.mu.end());
    gradient.insert(gradient.end(), grad.log_sigma.begin(), grad.log_sigma.end());

    adamw_step(params, gradient, state.policy_optim, config.lr);

    Policy updated;
    updated.mu.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(d));
    updated.log_sigma.assign(params.begin() + static_cast<std::ptrdiff_t>(d), params.end());
    for (double& ls : updated.log_sigma) {
      if (ls < config.log_sigma_floor) ls = config.log_sigma_floor;
    }
    state.policy = std::move(updated);
  }
  check_policy_finite(state.policy, state.iteration);

  IterationMetrics metrics;
  metrics.iteration = state.iteration;
  metrics.reward_mean = reward_sum / static_cast<double>(batch);
  metrics.baseline_value = baseline_value;
  metrics.calibrated_mean = metrics.reward_mean - baseline_value;
  metrics.eta_mean = eta_sum / config.inner_epochs;
  metrics.clip_drop_fraction = drop_sum / config.inner_epochs;
  metrics.mu_norm = l2_norm(state.policy.mu);
  double sigma_sum = 0.0;
  for (double ls : state.policy.log_sigma) sigma_sum += std::exp(ls);
  metrics.sigma_mean = sigma_sum / static_cast<double>(d);
  metrics.baseline_loss = baseline_loss;

  state.iteration += 1;
  return metrics;
}

bool plateau_reached(const std::vector<double>& rewards, const TrainConfig& config) {
  const EarlyStopConfig& stop = config.early_stop;
  if (!stop.enabled) return false;
  const int count = static_cast<int>(rewards.size());
  if (count < stop.min_iterations || count <= stop.window) return false;
  const std::vector<double> smoothed = gaussian_smooth(rewards, config.smooth_sigma);
  const double improvement =
      smoothed.back() - smoothed[smoothed.size() - 1 - static_cast<std::size_t>(stop.window)];
  return improvement < stop.min_delta;
}

TrainResult run_training(const TrainConfig& config) {
  TrainState state = make_train_state(config);
  TrainResult result;
  result.trajectory.reserve(static_cast<std::size_t>(config.total_steps));

  std::vector<double> rewards;
  rewards.reserve(static_cast<std::size_t>(config.total_steps));
  for (int k = 0; k < config.total_steps; ++k) {
    const IterationMetrics metrics = train_step(state, config);
    result.trajectory.push_back(metrics);
    rewards.push_back(metrics.reward_mean);
    NT_LOG_DEBUG("iter " + std::to_string(metrics.iteration) + " reward " +
                 std::to_string(metrics.reward_mean) + " baseline " +
                 std::to_string(metrics.baseline_value));

    if (plateau_reached(rewards, config)) {
      result.stopped_early = true;
      NT_LOG_INFO("plateau stop at iteration " + std::to_string(k + 1));
      break;
    }
  }
  result.policy = state.policy;
  result.net = state.net;
  result.iterations_run = static_cast<int>(result.trajectory.size());
  return result;
}

std::vector<double> gaussian_smooth(const std::vector<double>& values, double sigma) {
  if (sigma <= 0.0 || values.empty()) {
    return values;
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  const int n = static_cast<int>(values.size());
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  for (int k = -radius; k <= radius; ++k) {
    kernel[static_cast<std::size_t>(k + radius)] =
        std::exp(-0.5 * (static_cast<double>(k) / sigma) * (static_cast<double>(k) / sigma));
  }
  std::vector<double> smoothed(values.size());
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    double weight = 0.0;
    for (int k = -radius; k <= radius; ++k) {
      const int idx = i + k;
      if (idx < 0 || idx >= n) continue;
      const double w = kernel[static_cast<std::size_t>(k + radius)];
      acc += w * values[static_cast<std::size_t>(idx)];
      weight += w;
    }
    smoothed[static_cast<std::size_t>(i)] = acc / weight;
  }
  return smoothed;
}

}  // namespace noisetuner
