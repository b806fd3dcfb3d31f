// Command-line front end: train / eval / oracle subcommands over a single
// experiment config file. Exit codes: 0 ok, 2 config error, 3 runtime error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "noisetuner/config.hpp"
#include "noisetuner/log.hpp"
#include "noisetuner/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_dir;
  std::string checkpoint_path;
  std::int64_t seed = -1;
  bool seed_given = false;
};

noisetuner::ExperimentConfig load_with_overrides(const CommonArgs& args) {
  noisetuner::ExperimentConfig config = noisetuner::load_config(args.config_path);
  if (args.seed_given) {
    config.train.seed = static_cast<std::uint64_t>(args.seed);
  }
  if (!args.output_dir.empty()) {
    config.output_dir = args.output_dir;
  }
  return config;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool want_checkpoint) {
  cmd->add_option("--config", args.config_path, "experiment config file")->required();
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--out", args.output_dir, "override the output directory");
  if (want_checkpoint) {
    cmd->add_option("--checkpoint", args.checkpoint_path, "checkpoint JSON path");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noise_tuner: tunes a generator's initial noise distribution "
               "against a reward function"};
  app.require_subcommand(1);

  CommonArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "run the optimization loop");
  add_common(train_cmd, train_args, false);

  CommonArgs eval_args;
  int eval_n = 0;
  CLI::App* eval_cmd = app.add_subcommand("eval", "sample from a trained policy");
  add_common(eval_cmd, eval_args, true);
  eval_cmd->add_option("--n", eval_n, "fresh samples to draw (default: eval.samples)");

  CommonArgs oracle_args;
  std::string oracle_kind;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "brute-force estimates for the configured task");
  oracle_cmd->add_option("kind", oracle_kind, "expected-reward | fd-gradient | hit-rate")
      ->required();
  add_common(oracle_cmd, oracle_args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? noisetuner::kExitOk : noisetuner::kExitConfigError;
  }

  try {
    if (train_cmd->parsed()) {
      train_args.seed_given = train_cmd->count("--seed") > 0;
      return noisetuner::cmd_train(load_with_overrides(train_args));
    }
    if (eval_cmd->parsed()) {
      eval_args.seed_given = eval_cmd->count("--seed") > 0;
      const noisetuner::ExperimentConfig config = load_with_overrides(eval_args);
      if (eval_args.checkpoint_path.empty()) {
        eval_args.checkpoint_path = config.output_dir + "/checkpoint.json";
      }
      const int n = eval_cmd->count("--n") > 0 ? eval_n : config.eval_samples;
      return noisetuner::cmd_eval(config, eval_args.checkpoint_path, n);
    }
    if (oracle_cmd->parsed()) {
      oracle_args.seed_given = oracle_cmd->count("--seed") > 0;
      const noisetuner::ExperimentConfig config = load_with_overrides(oracle_args);
      noisetuner::OracleKind kind;
      if (oracle_kind == "expected-reward") {
        kind = noisetuner::OracleKind::kExpectedReward;
      } else if (oracle_kind == "fd-gradient") {
        kind = noisetuner::OracleKind::kFdGradient;
      } else if (oracle_kind == "hit-rate") {
        kind = noisetuner::OracleKind::kHitRate;
      } else {
        NT_LOG_ERROR("unknown oracle kind '" + oracle_kind + "'");
        return noisetuner::kExitConfigError;
      }
      return noisetuner::cmd_oracle(config, kind, oracle_args.checkpoint_path);
    }
  } catch (const noisetuner::ConfigError& err) {
    NT_LOG_ERROR(err.what());
    return noisetuner::kExitConfigError;
  } catch (const std::exception& err) {
    NT_LOG_ERROR(err.what());
    return noisetuner::kExitRuntimeError;
  }
  return noisetuner::kExitOk;
}
