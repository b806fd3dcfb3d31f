#ifndef NOISETUNER_RUNNER_HPP_
#define NOISETUNER_RUNNER_HPP_

#include <string>
#include <vector>

#include "noisetuner/config.hpp"
#include "noisetuner/serialize.hpp"
#include "noisetuner/trainer.hpp"

namespace noisetuner {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

// Metrics CSV column order (one row per iteration).
std::string metrics_csv_header();
std::string metrics_to_csv(const std::vector<IterationMetrics>& trajectory);

// Smoothed-trajectory CSV: iter plus the Gaussian-smoothed raw reward.
// Same row count as the metrics CSV.
std::string smoothed_csv(const std::vector<IterationMetrics>& trajectory, double sigma);

// Runs the training loop and writes checkpoint.json, metrics.csv, and
// metrics_smoothed.csv into the output directory.
int cmd_train(const ExperimentConfig& config);

// Draws n fresh samples from the checkpointed policy and reports expected
// reward (plus mode hit rate and output log-density for mixture tasks) as
// JSON on stdout; also written to eval.json in the output directory.
int cmd_eval(const ExperimentConfig& config, const std::string& checkpoint_path, int n);

enum class OracleKind {
  kExpectedReward,
  kFdGradient,
  kHitRate,
};

// Brute-force estimates for the configured task, reported as JSON on stdout
// and written to the output directory. Uses the initial policy unless a
// checkpoint is given.
int cmd_oracle(const ExperimentConfig& config, OracleKind kind,
               const std::string& checkpoint_path);

}  // namespace noisetuner

#endif  // NOISETUNER_RUNNER_HPP_
