#include "noisetuner/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace noisetuner {

namespace {

constexpr int kFormatVersion = 1;

void check_version(const nlohmann::json& j, const char* what) {
  if (!j.contains("format_version") || j.at("format_version").get<int>() != kFormatVersion) {
    throw std::runtime_error(std::string(what) + ": unsupported or missing format_version");
  }
}

}  // namespace

nlohmann::json policy_to_json(const Policy& policy) {
  return nlohmann::json{
      {"format_version", kFormatVersion},
      {"dim", policy.dim()},
      {"mu", policy.mu},
      {"log_sigma", policy.log_sigma},
  };
}

Policy policy_from_json(const nlohmann::json& j) {
  check_version(j, "policy");
  Policy policy;
  policy.mu = j.at("mu").get<std::vector<double>>();
  policy.log_sigma = j.at("log_sigma").get<std::vector<double>>();
  const auto dim = j.at("dim").get<std::size_t>();
  if (policy.mu.size() != dim || policy.log_sigma.size() != dim) {
    throw std::runtime_error("policy: dim field does not match array lengths");
  }
  return policy;
}

nlohmann::json optim_state_to_json(const OptimState& state) {
  return nlohmann::json{
      {"format_version", kFormatVersion},
      {"m1", state.m1},
      {"m2", state.m2},
      {"step_count", state.step_count},
      {"beta1", state.hyper.beta1},
      {"beta2", state.hyper.beta2},
      {"eps", state.hyper.eps},
      {"weight_decay", state.hyper.weight_decay},
  };
}

OptimState optim_state_from_json(const nlohmann::json& j) {
  check_version(j, "optim state");
  OptimState state;
  state.m1 = j.at("m1").get<std::vector<double>>();
  state.m2 = j.at("m2").get<std::vector<double>>();
  state.step_count = j.at("step_count").get<std::int64_t>();
  state.hyper.beta1 = j.at("beta1").get<double>();
  state.hyper.beta2 = j.at("beta2").get<double>();
  state.hyper.eps = j.at("eps").get<double>();
  state.hyper.weight_decay = j.at("weight_decay").get<double>();
  if (state.m1.size() != state.m2.size()) {
    throw std::runtime_error("optim state: moment lengths differ");
  }
  return state;
}

nlohmann::json baseline_net_to_json(const BaselineNet& net) {
  return nlohmann::json{
      {"format_version", kFormatVersion},
      {"input_mode", net.input_mode == BaselineInput::kFullParams ? "full" : "summary"},
      {"input_width", net.input_width},
      {"hidden_width", net.hidden_width},
      {"w1", net.w1},
      {"b1", net.b1},
      {"w2", net.w2},
      {"b2", net.b2},
      {"w3", net.w3},
      {"b3", net.b3},
      {"optim", optim_state_to_json(net.optim)},
  };
}

BaselineNet baseline_net_from_json(const nlohmann::json& j) {
  check_version(j, "baseline net");
  BaselineNet net;
  const std::string mode = j.at("input_mode").get<std::string>();
  net.input_mode = mode == "full" ? BaselineInput::kFullParams : BaselineInput::kSummaryStats;
  net.input_width = j.at("input_width").get<std::size_t>();
  net.hidden_width = j.at("hidden_width").get<std::size_t>();
  net.w1 = j.at("w1").get<std::vector<double>>();
  net.b1 = j.at("b1").get<std::vector<double>>();
  net.w2 = j.at("w2").get<std::vector<double>>();
  net.b2 = j.at("b2").get<std::vector<double>>();
  net.w3 = j.at("w3").get<std::vector<double>>();
  net.b3 = j.at("b3").get<std::vector<double>>();
  net.optim = optim_state_from_json(j.at("optim"));
  if (net.w1.size() != net.hidden_width * net.input_width ||
      net.b1.size() != net.hidden_width ||
      net.w2.size() != net.hidden_width * net.hidden_width ||
      net.b2.size() != net.hidden_width || net.w3.size() != net.hidden_width ||
      net.b3.size() != 1) {
    throw std::runtime_error("baseline net: layer shapes inconsistent");
  }
  return net;
}

nlohmann::json checkpoint_to_json(const Checkpoint& checkpoint) {
  return nlohmann::json{
      {"format_version", kFormatVersion},
      {"iteration", checkpoint.iteration},
      {"seed", checkpoint.seed},
      {"policy", policy_to_json(checkpoint.policy)},
      {"baseline_net", baseline_net_to_json(checkpoint.net)},
      {"policy_optim", optim_state_to_json(checkpoint.policy_optim)},
  };
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  check_version(j, "checkpoint");
  Checkpoint checkpoint;
  checkpoint.iteration = j.at("iteration").get<int>();
  checkpoint.seed = j.at("seed").get<std::uint64_t>();
  checkpoint.policy = policy_from_json(j.at("policy"));
  checkpoint.net = baseline_net_from_json(j.at("baseline_net"));
  checkpoint.policy_optim = optim_state_from_json(j.at("policy_optim"));
  return checkpoint;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  file << contents;
  if (!file) {
    throw std::runtime_error("write failed for '" + path + "'");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

}  // namespace noisetuner
