#ifndef NOISETUNER_SERIALIZE_HPP_
#define NOISETUNER_SERIALIZE_HPP_

#include <string>

#include <json.hpp>

#include "noisetuner/adamw.hpp"
#include "noisetuner/baseline_net.hpp"
#include "noisetuner/policy.hpp"

namespace noisetuner {

// Versioned JSON forms for checkpoint artifacts. Keys are emitted in sorted
// order and doubles use shortest round-trip formatting, so equal values
// always serialize to identical bytes.

nlohmann::json policy_to_json(const Policy& policy);
Policy policy_from_json(const nlohmann::json& j);

nlohmann::json optim_state_to_json(const OptimState& state);
OptimState optim_state_from_json(const nlohmann::json& j);

nlohmann::json baseline_net_to_json(const BaselineNet& net);
BaselineNet baseline_net_from_json(const nlohmann::json& j);

struct Checkpoint {
  Policy policy;
  BaselineNet net;
  OptimState policy_optim;
  int iteration = 0;
  std::uint64_t seed = 0;
};

nlohmann::json checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace noisetuner

#endif  // NOISETUNER_SERIALIZE_HPP_
