#ifndef NOISETUNER_CONFIG_HPP_
#define NOISETUNER_CONFIG_HPP_

#include <stdexcept>
#include <string>

#include "noisetuner/trainer.hpp"

namespace noisetuner {

// Raised on malformed config text or invariant violations; the message
// names the offending key (and line, for parse errors).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

// Everything one experiment needs: the training setup plus output and
// evaluation plumbing. Loaded from a flat `key = value` file with dotted
// key paths; see the README for the full key list.
struct ExperimentConfig {
  TrainConfig train;
  std::string output_dir = "out";
  int log_every = 1;
  int eval_samples = 1000;
  int oracle_samples = 100000;
  double oracle_fd_step = 1e-3;
};

ExperimentConfig load_config(const std::string& path);

// Parses config text directly; `origin` labels error messages.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

// Canonical re-serialization with all defaults filled in. Parsing the
// output reproduces the config exactly.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace noisetuner

#endif  // NOISETUNER_CONFIG_HPP_
