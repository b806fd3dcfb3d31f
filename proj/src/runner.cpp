#include "noisetuner/runner.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "noisetuner/log.hpp"
#include "noisetuner/oracle.hpp"

namespace noisetuner {

namespace {

constexpr std::uint64_t kEvalStream = 0x6576616cULL;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;
  return std::string(buffer, ptr);
}

const GaussianMixture* task_mixture(const TrainConfig& train) {
  if (train.reward.kind == RewardKind::kModeIndicator ||
      train.reward.kind == RewardKind::kMixtureLogDensity) {
    return &train.reward.mixture;
  }
  if (train.generator.kind == GeneratorKind::kExactDdim) {
    return &train.generator.mixture;
  }
  return nullptr;
}

nlohmann::json estimate_to_json(const McEstimate& estimate) {
  return nlohmann::json{
      {"mean", estimate.mean}, {"std_error", estimate.std_error}, {"n", estimate.n}};
}

void emit_result(const ExperimentConfig& config, const std::string& filename,
                 const nlohmann::json& result) {
  const std::string text = result.dump(2) + "\n";
  std::cout << text;
  std::filesystem::create_directories(config.output_dir);
  write_text_file(config.output_dir + "/" + filename, text);
}

int guarded(const char* what, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& err) {
    NT_LOG_ERROR(std::string(what) + ": " + err.what());
    return kExitConfigError;
  } catch (const std::invalid_argument& err) {
    NT_LOG_ERROR(std::string(what) + ": " + err.what());
    return kExitConfigError;
  } catch (const std::exception& err) {
    NT_LOG_ERROR(std::string(what) + ": " + err.what());
    return kExitRuntimeError;
  }
}

}  // namespace

std::string metrics_csv_header() {
  return "iter,reward,baseline,calibrated,eta_mean,clip_drop_fraction,mu_norm,sigma_mean";
}

std::string metrics_to_csv(const std::vector<IterationMetrics>& trajectory) {
  std::ostringstream out;
  out << metrics_csv_header() << "\n";
  for (const IterationMetrics& m : trajectory) {
    out << m.iteration << "," << format_double(m.reward_mean) << ","
        << format_double(m.baseline_value) << "," << format_double(m.calibrated_mean) << ","
        << format_double(m.eta_mean) << "," << format_double(m.clip_drop_fraction) << ","
        << format_double(m.mu_norm) << "," << format_double(m.sigma_mean) << "\n";
  }
  return out.str();
}

std::string smoothed_csv(const std::vector<IterationMetrics>& trajectory, double sigma) {
  std::vector<double> rewards;
  rewards.reserve(trajectory.size());
  for (const IterationMetrics& m : trajectory) rewards.push_back(m.reward_mean);
  const std::vector<double> smoothed = gaussian_smooth(rewards, sigma);
  std::ostringstream out;
  out << "iter,reward_smoothed\n";
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    out << trajectory[i].iteration << "," << format_double(smoothed[i]) << "\n";
  }
  return out.str();
}

int cmd_train(const ExperimentConfig& config) {
  return guarded("train", [&config] {
    NT_LOG_INFO("training: " + std::to_string(config.train.total_steps) + " steps, dim " +
                std::to_string(config.train.dim));
    TrainState state = make_train_state(config.train);
    std::vector<IterationMetrics> trajectory;
    trajectory.reserve(static_cast<std::size_t>(config.train.total_steps));
    std::vector<double> rewards;
    for (int k = 0; k < config.train.total_steps; ++k) {
      const IterationMetrics metrics = train_step(state, config.train);
      trajectory.push_back(metrics);
      rewards.push_back(metrics.reward_mean);
      if (metrics.iteration % config.log_every == 0) {
        NT_LOG_DEBUG("iter " + std::to_string(metrics.iteration) + " reward " +
                     format_double(metrics.reward_mean) + " baseline " +
                     format_double(metrics.baseline_value));
      }
      if (plateau_reached(rewards, config.train)) {
        NT_LOG_INFO("plateau stop at iteration " + std::to_string(k + 1));
        break;
      }
    }

    std::filesystem::create_directories(config.output_dir);
    Checkpoint checkpoint;
    checkpoint.policy = state.policy;
    checkpoint.net = state.net;
    checkpoint.policy_optim = state.policy_optim;
    checkpoint.iteration = state.iteration;
    checkpoint.seed = config.train.seed;
    write_text_file(config.output_dir + "/checkpoint.json",
                    checkpoint_to_json(checkpoint).dump(2) + "\n");
    write_text_file(config.output_dir + "/metrics.csv", metrics_to_csv(trajectory));
    write_text_file(config.output_dir + "/metrics_smoothed.csv",
                    smoothed_csv(trajectory, config.train.smooth_sigma));
    NT_LOG_INFO("wrote checkpoint and metrics to " + config.output_dir);
  });
}

int cmd_eval(const ExperimentConfig& config, const std::string& checkpoint_path, int n) {
  return guarded("eval", [&] {
    if (n < 1) {
      throw std::invalid_argument("eval: sample count must be >= 1");
    }
    const Checkpoint checkpoint =
        checkpoint_from_json(nlohmann::json::parse(read_text_file(checkpoint_path)));
    if (checkpoint.policy.dim() != config.train.dim) {
      throw std::invalid_argument("eval: checkpoint dim " +
                                  std::to_string(checkpoint.policy.dim()) +
                                  " != config dim " + std::to_string(config.train.dim));
    }
    const std::uint64_t seed = mix_seed(config.train.seed, kEvalStream);
    nlohmann::json result;
    result["samples"] = n;
    result["expected_reward"] = estimate_to_json(expected_reward(
        checkpoint.policy, config.train.generator, config.train.reward, n, seed));
    const GaussianMixture* mixture = task_mixture(config.train);
    if (mixture != nullptr) {
      if (config.train.reward.kind == RewardKind::kModeIndicator) {
        result["mode_hit_rate"] = estimate_to_json(
            mode_hit_rate(checkpoint.policy, config.train.generator, *mixture,
                          config.train.reward.target_component, n, seed));
      }
      result["mean_output_log_density"] = estimate_to_json(mean_output_log_density(
          checkpoint.policy, config.train.generator, *mixture, n, seed));
    }
    emit_result(config, "eval.json", result);
  });
}

int cmd_oracle(const ExperimentConfig& config, OracleKind kind,
               const std::string& checkpoint_path) {
  return guarded("oracle", [&] {
    Policy policy = Policy::standard(config.train.dim);
    if (!checkpoint_path.empty()) {
      policy = checkpoint_from_json(nlohmann::json::parse(read_text_file(checkpoint_path)))
                   .policy;
    }
    const std::uint64_t seed = config.train.seed;
    nlohmann::json result;
    switch (kind) {
      case OracleKind::kExpectedReward: {
        result["expected_reward"] = estimate_to_json(
            expected_reward(policy, config.train.generator, config.train.reward,
                            config.oracle_samples, seed));
        emit_result(config, "oracle_expected_reward.json", result);
        break;
      }
      case OracleKind::kFdGradient: {
        const ObjectiveGradientEstimate grad =
            fd_objective_gradient(policy, config.train.generator, config.train.reward,
                                  config.oracle_samples, config.oracle_fd_step, seed);
        result["grad_mu"] = grad.mu;
        result["grad_mu_std_error"] = grad.mu_std_error;
        result["grad_log_sigma"] = grad.log_sigma;
        result["grad_log_sigma_std_error"] = grad.log_sigma_std_error;
        result["n"] = config.oracle_samples;
        result["h"] = config.oracle_fd_step;
        emit_result(config, "oracle_fd_gradient.json", result);
        break;
      }
      case OracleKind::kHitRate: {
        const GaussianMixture* mixture = task_mixture(config.train);
        if (mixture == nullptr) {
          throw std::invalid_argument("oracle hit-rate: config has no mixture task");
        }
        const std::size_t target = config.train.reward.kind == RewardKind::kModeIndicator
                                       ? config.train.reward.target_component
                                       : 0;
        result["target_component"] = target;
        result["hit_rate"] = estimate_to_json(mode_hit_rate(
            policy, config.train.generator, *mixture, target, config.oracle_samples, seed));
        emit_result(config, "oracle_hit_rate.json", result);
        break;
      }
    }
  });
}

}  // namespace noisetuner
