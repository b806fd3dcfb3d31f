#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "noisetuner/runner.hpp"

using namespace noisetuner;

namespace {

std::string unique_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("noise_tuner_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

ExperimentConfig quadratic_experiment(const std::string& out_dir) {
  const std::string text = R"(
dim = 2
seed = 11
train.steps = 25
train.batch_size = 4
train.lr = 0.02
generator.kind = identity
reward.kind = neg_sq_dist
reward.target = 1 -1
)";
  ExperimentConfig config = parse_config_text(text, "test");
  config.output_dir = out_dir;
  return config;
}

std::string slurp(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  REQUIRE(file.good());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

int line_count(const std::string& text) {
  int lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_CASE("training writes checkpoint and metrics with the documented schema") {
  const std::string out_dir = unique_dir("train");
  const ExperimentConfig config = quadratic_experiment(out_dir);
  CHECK(cmd_train(config) == kExitOk);

  const std::string metrics = slurp(out_dir + "/metrics.csv");
  CHECK(metrics.rfind(metrics_csv_header(), 0) == 0);
  CHECK(line_count(metrics) == 25 + 1);

  const std::string smoothed = slurp(out_dir + "/metrics_smoothed.csv");
  CHECK(line_count(smoothed) == 25 + 1);

  const auto checkpoint =
      checkpoint_from_json(nlohmann::json::parse(slurp(out_dir + "/checkpoint.json")));
  CHECK(checkpoint.policy.dim() == 2);
  CHECK(checkpoint.iteration == 25);
  CHECK(checkpoint.seed == 11);
}

TEST_CASE("reruns with the same seed are byte-identical") {
  const std::string dir_a = unique_dir("rerun_a");
  const std::string dir_b = unique_dir("rerun_b");
  ExperimentConfig config = quadratic_experiment(dir_a);
  CHECK(cmd_train(config) == kExitOk);
  config.output_dir = dir_b;
  CHECK(cmd_train(config) == kExitOk);
  CHECK(slurp(dir_a + "/metrics.csv") == slurp(dir_b + "/metrics.csv"));
  CHECK(slurp(dir_a + "/checkpoint.json") == slurp(dir_b + "/checkpoint.json"));
  CHECK(slurp(dir_a + "/metrics_smoothed.csv") == slurp(dir_b + "/metrics_smoothed.csv"));
}

TEST_CASE("checkpoint save-load-save is byte stable") {
  const std::string out_dir = unique_dir("ckpt");
  const ExperimentConfig config = quadratic_experiment(out_dir);
  CHECK(cmd_train(config) == kExitOk);
  const std::string first = slurp(out_dir + "/checkpoint.json");
  const Checkpoint checkpoint = checkpoint_from_json(nlohmann::json::parse(first));
  const std::string second = checkpoint_to_json(checkpoint).dump(2) + "\n";
  CHECK(first == second);
}

TEST_CASE("zero-step training checkpoints the initial policy") {
  const std::string out_dir = unique_dir("zerostep");
  ExperimentConfig config = quadratic_experiment(out_dir);
  config.train.total_steps = 0;
  CHECK(cmd_train(config) == kExitOk);
  const auto checkpoint =
      checkpoint_from_json(nlohmann::json::parse(slurp(out_dir + "/checkpoint.json")));
  for (double m : checkpoint.policy.mu) CHECK(m == 0.0);
  for (double ls : checkpoint.policy.log_sigma) CHECK(ls == 0.0);
}

TEST_CASE("eval reports expected reward from a checkpoint") {
  const std::string out_dir = unique_dir("eval");
  const ExperimentConfig config = quadratic_experiment(out_dir);
  CHECK(cmd_train(config) == kExitOk);
  CHECK(cmd_eval(config, out_dir + "/checkpoint.json", 500) == kExitOk);
  const auto result = nlohmann::json::parse(slurp(out_dir + "/eval.json"));
  CHECK(result.contains("expected_reward"));
  CHECK(result["expected_reward"]["n"] == 500);
}

TEST_CASE("eval rejects a non-positive sample count") {
  const std::string out_dir = unique_dir("eval_bad");
  const ExperimentConfig config = quadratic_experiment(out_dir);
  CHECK(cmd_train(config) == kExitOk);
  CHECK(cmd_eval(config, out_dir + "/checkpoint.json", 0) == kExitConfigError);
}

TEST_CASE("eval fails cleanly on a missing checkpoint") {
  const std::string out_dir = unique_dir("eval_missing");
  const ExperimentConfig config = quadratic_experiment(out_dir);
  CHECK(cmd_eval(config, out_dir + "/nope.json", 10) == kExitRuntimeError);
}

TEST_CASE("oracle subcommands write result blobs") {
  const std::string out_dir = unique_dir("oracle");
  ExperimentConfig config = quadratic_experiment(out_dir);
  config.oracle_samples = 2000;
  CHECK(cmd_oracle(config, OracleKind::kExpectedReward, "") == kExitOk);
  const auto result =
      nlohmann::json::parse(slurp(out_dir + "/oracle_expected_reward.json"));
  // Initial policy N(0, I) on the quadratic: E[r] = -(1 + 1) - 2 = -4.
  CHECK(result["expected_reward"]["mean"].get<double>() == doctest::Approx(-4.0).epsilon(0.1));

  CHECK(cmd_oracle(config, OracleKind::kFdGradient, "") == kExitOk);
  const auto grad = nlohmann::json::parse(slurp(out_dir + "/oracle_fd_gradient.json"));
  CHECK(grad["grad_mu"].size() == 2);

  // No mixture in this task: hit-rate is a config error.
  CHECK(cmd_oracle(config, OracleKind::kHitRate, "") == kExitConfigError);
}

TEST_CASE("early stop halts a flat run before the step budget") {
  const std::string out_dir = unique_dir("earlystop");
  ExperimentConfig config = quadratic_experiment(out_dir);
  config.train.total_steps = 200;
  config.train.reward.scale = 0.0;  // constant reward: plateau from the start
  config.train.reward.shift = 1.0;
  config.train.early_stop.enabled = true;
  config.train.early_stop.min_iterations = 40;
  config.train.early_stop.window = 20;
  CHECK(cmd_train(config) == kExitOk);
  const std::string metrics = slurp(out_dir + "/metrics.csv");
  CHECK(line_count(metrics) < 201);
}
