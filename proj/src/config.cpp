#include "noisetuner/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace noisetuner {

namespace {

struct RawValue {
  std::string text;
  int line = 0;
};

// Flat key -> raw value store with consumption tracking, so typos surface
// as "unknown key" errors instead of silently using defaults.
class KeyValueMap {
 public:
  KeyValueMap(std::map<std::string, RawValue> values, std::string origin)
      : values_(std::move(values)), origin_(std::move(origin)) {}

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) {
    const RawValue* raw = consume(key);
    return raw == nullptr ? fallback : raw->text;
  }

  bool get_bool(const std::string& key, bool fallback) {
    const RawValue* raw = consume(key);
    if (raw == nullptr) return fallback;
    if (raw->text == "true") return true;
    if (raw->text == "false") return false;
    fail(key, *raw, "expected true or false");
  }

  long long get_int(const std::string& key, long long fallback) {
    const RawValue* raw = consume(key);
    if (raw == nullptr) return fallback;
    long long value = 0;
    const auto [ptr, ec] =
        std::from_chars(raw->text.data(), raw->text.data() + raw->text.size(), value);
    if (ec != std::errc() || ptr != raw->text.data() + raw->text.size()) {
      fail(key, *raw, "expected an integer");
    }
    return value;
  }

  double get_double(const std::string& key, double fallback) {
    const RawValue* raw = consume(key);
    if (raw == nullptr) return fallback;
    return parse_double(key, *raw, raw->text);
  }

  std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback) {
    const RawValue* raw = consume(key);
    if (raw == nullptr) return fallback;
    std::vector<double> values;
    std::string token;
    std::istringstream stream(raw->text);
    while (stream >> token) {
      if (!token.empty() && token.back() == ',') token.pop_back();
      if (token.empty()) continue;
      values.push_back(parse_double(key, *raw, token));
    }
    if (values.empty()) fail(key, *raw, "expected a list of numbers");
    return values;
  }

  [[noreturn]] void fail(const std::string& key, const RawValue& raw,
                         const std::string& reason) const {
    throw ConfigError(origin_ + ":" + std::to_string(raw.line) + ": key '" + key + "': " +
                      reason + " (got '" + raw.text + "')");
  }

  [[noreturn]] void reject(const std::string& key, const std::string& reason) const {
    const auto it = values_.find(key);
    const int line = it == values_.end() ? 0 : it->second.line;
    throw ConfigError(origin_ + ":" + std::to_string(line) + ": key '" + key + "': " + reason);
  }

  void require_all_consumed() const {
    for (const auto& [key, raw] : values_) {
      if (consumed_.count(key) == 0) {
        throw ConfigError(origin_ + ":" + std::to_string(raw.line) + ": unknown key '" + key +
                          "'");
      }
    }
  }

 private:
  const RawValue* consume(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return nullptr;
    consumed_.insert(key);
    return &it->second;
  }

  double parse_double(const std::string& key, const RawValue& raw,
                      const std::string& token) const {
    if (token == "inf") return std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      fail(key, raw, "expected a number");
    }
    return value;
  }

  std::map<std::string, RawValue> values_;
  std::set<std::string> consumed_;
  std::string origin_;
};

KeyValueMap tokenize(const std::string& text, const std::string& origin) {
  std::map<std::string, RawValue> values;
  std::istringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quotes = !in_quotes;
      if (line[i] == '#' && !in_quotes) {
        line.erase(i);
        break;
      }
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    const std::size_t equals = line.find('=');
    if (equals == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_number) +
                        ": expected 'key = value', got '" + line + "'");
    }
    std::string key = line.substr(0, equals);
    std::string value = line.substr(equals + 1);
    const auto key_end = key.find_last_not_of(" \t");
    key = key.substr(0, key_end == std::string::npos ? 0 : key_end + 1);
    const auto value_begin = value.find_first_not_of(" \t");
    value = value_begin == std::string::npos ? "" : value.substr(value_begin);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_number) + ": empty key");
    }
    if (values.count(key) > 0) {
      throw ConfigError(origin + ":" + std::to_string(line_number) + ": duplicate key '" +
                        key + "'");
    }
    values[key] = RawValue{value, line_number};
  }
  return KeyValueMap(std::move(values), origin);
}

std::vector<double> broadcast(std::vector<double> values, std::size_t dim,
                              KeyValueMap& map, const std::string& key) {
  if (values.size() == 1 && dim > 1) {
    return std::vector<double>(dim, values[0]);
  }
  if (values.size() != dim) {
    map.reject(key, "expected " + std::to_string(dim) + " values, got " +
                        std::to_string(values.size()));
  }
  return values;
}

GaussianMixture parse_mixture(KeyValueMap& map, std::size_t dim) {
  GaussianMixture mixture;
  mixture.weights = map.get_double_list("mixture.weights", {});
  if (mixture.weights.empty()) {
    map.reject("mixture.weights", "required for mixture-based generators/rewards");
  }
  for (std::size_t k = 0; k < mixture.weights.size(); ++k) {
    const std::string mean_key = "mixture.mean." + std::to_string(k);
    const std::string std_key = "mixture.std." + std::to_string(k);
    if (!map.has(mean_key)) map.reject(mean_key, "missing component mean");
    mixture.means.push_back(broadcast(map.get_double_list(mean_key, {}), dim, map, mean_key));
    mixture.stds.push_back(
        broadcast(map.get_double_list(std_key, {1.0}), dim, map, std_key));
  }
  try {
    mixture.validate();
  } catch (const std::invalid_argument& err) {
    map.reject("mixture.weights", err.what());
  }
  return mixture;
}

RewardSpec parse_reward_leaf(KeyValueMap& map, const std::string& prefix, std::size_t dim,
                             const GaussianMixture* mixture) {
  const std::string kind = map.get_string(prefix + "kind", "");
  if (kind.empty()) map.reject(prefix + "kind", "missing reward kind");
  RewardSpec spec;
  if (kind == "neg_sq_dist") {
    spec = RewardSpec::neg_squared_distance(
        broadcast(map.get_double_list(prefix + "target", {0.0}), dim, map, prefix + "target"));
  } else if (kind == "mixture_log_density") {
    if (mixture == nullptr) map.reject(prefix + "kind", "needs a [mixture.*] section");
    spec = RewardSpec::mixture_log_density_reward(*mixture);
  } else if (kind == "mode_indicator") {
    if (mixture == nullptr) map.reject(prefix + "kind", "needs a [mixture.*] section");
    const long long component = map.get_int(prefix + "component", 0);
    if (component < 0 || static_cast<std::size_t>(component) >= mixture->component_count()) {
      map.reject(prefix + "component", "component index out of range");
    }
    spec = RewardSpec::mode_indicator(*mixture, static_cast<std::size_t>(component));
  } else {
    map.reject(prefix + "kind", "unknown reward kind '" + kind + "'");
  }
  return spec;
}

RewardSpec parse_reward(KeyValueMap& map, std::size_t dim, const GaussianMixture* mixture) {
  const std::string kind = map.get_string("reward.kind", "");
  if (kind.empty()) map.reject("reward.kind", "missing reward kind");
  RewardSpec spec;
  if (kind == "weighted_sum") {
    const long long count = map.get_int("reward.terms", 0);
    if (count < 1) map.reject("reward.terms", "weighted_sum needs at least one term");
    std::vector<RewardSpec> terms;
    std::vector<double> weights;
    for (long long i = 0; i < count; ++i) {
      const std::string prefix = "reward.term." + std::to_string(i) + ".";
      terms.push_back(parse_reward_leaf(map, prefix, dim, mixture));
      weights.push_back(map.get_double(prefix + "weight", 1.0));
    }
    spec = RewardSpec::weighted_sum(std::move(terms), std::move(weights));
  } else {
    spec = parse_reward_leaf(map, "reward.", dim, mixture);
  }
  spec.condition = map.get_string("reward.condition", "");
  spec.scale = map.get_double("reward.scale", 1.0);
  spec.shift = map.get_double("reward.shift", 0.0);
  if (!std::isfinite(spec.scale) || !std::isfinite(spec.shift)) {
    map.reject("reward.scale", "scale/shift must be finite");
  }
  return spec;
}

std::string format_double(double value) {
  if (std::isinf(value)) return "inf";
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;
  return std::string(buffer, ptr);
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += " ";
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  KeyValueMap map = tokenize(text, origin);
  ExperimentConfig config;
  TrainConfig& train = config.train;

  const long long dim = map.get_int("dim", 0);
  if (dim < 1) map.reject("dim", "dim must be a positive integer");
  train.dim = static_cast<std::size_t>(dim);

  train.seed = static_cast<std::uint64_t>(map.get_int("seed", 0));
  train.total_steps = static_cast<int>(map.get_int("train.steps", 150));
  train.batch_size = static_cast<int>(map.get_int("train.batch_size", 1));
  train.lr = map.get_double("train.lr", 0.001);
  train.clip_margin = map.get_double("train.clip_margin", 0.02);
  if (!(train.clip_margin > 0.0)) {
    map.reject("train.clip_margin", "clip margin must be strictly positive");
  }
  const std::string ratio_mode = map.get_string("train.ratio_mode", "per_dim_geo_mean");
  if (ratio_mode == "full") {
    train.ratio_mode = RatioMode::kFull;
  } else if (ratio_mode == "per_dim_geo_mean") {
    train.ratio_mode = RatioMode::kPerDimGeoMean;
  } else {
    map.reject("train.ratio_mode", "expected 'full' or 'per_dim_geo_mean'");
  }
  const std::string clip_style = map.get_string("train.clip_style", "drop");
  if (clip_style == "drop") {
    train.clip_style = ClipStyle::kDrop;
  } else if (clip_style == "clamp") {
    train.clip_style = ClipStyle::kClamp;
  } else {
    map.reject("train.clip_style", "expected 'drop' or 'clamp'");
  }
  train.replay_window = static_cast<int>(map.get_int("train.replay_window", 1));
  train.inner_epochs = static_cast<int>(map.get_int("train.inner_epochs", 1));
  train.log_sigma_floor = map.get_double("train.log_sigma_floor", -10.0);
  train.smooth_sigma = map.get_double("train.smooth_sigma", 5.0);
  train.adamw.beta1 = map.get_double("train.beta1", 0.9);
  train.adamw.beta2 = map.get_double("train.beta2", 0.999);
  train.adamw.eps = map.get_double("train.eps", 1e-8);
  train.adamw.weight_decay = map.get_double("train.weight_decay", 0.01);
  train.early_stop.enabled = map.get_bool("train.early_stop", false);
  train.early_stop.min_delta = map.get_double("train.early_stop_min_delta", 1e-3);
  train.early_stop.window = static_cast<int>(map.get_int("train.early_stop_window", 30));
  train.early_stop.min_iterations =
      static_cast<int>(map.get_int("train.early_stop_min_iters", 60));

  train.baseline.enabled = map.get_bool("baseline.enabled", true);
  train.baseline.hidden_width =
      static_cast<std::size_t>(map.get_int("baseline.hidden", 64));
  train.baseline.lr = map.get_double("baseline.lr", 1e-3);
  const std::string input_mode = map.get_string("baseline.input", "full");
  if (input_mode == "full") {
    train.baseline.input_mode = BaselineInput::kFullParams;
  } else if (input_mode == "summary") {
    train.baseline.input_mode = BaselineInput::kSummaryStats;
  } else {
    map.reject("baseline.input", "expected 'full' or 'summary'");
  }

  const bool has_mixture = map.has("mixture.weights");
  GaussianMixture mixture;
  if (has_mixture) {
    mixture = parse_mixture(map, train.dim);
  }

  const std::string generator_kind = map.get_string("generator.kind", "");
  if (generator_kind.empty()) map.reject("generator.kind", "missing generator kind");
  if (generator_kind == "identity") {
    train.generator = GeneratorSpec::identity(train.dim);
  } else if (generator_kind == "linear") {
    std::vector<double> matrix;
    if (map.has("generator.matrix")) {
      matrix = map.get_double_list("generator.matrix", {});
      if (matrix.size() != train.dim * train.dim) {
        map.reject("generator.matrix", "expected dim*dim entries");
      }
    } else {
      const double scale = map.get_double("generator.scale", 1.0);
      matrix.assign(train.dim * train.dim, 0.0);
      for (std::size_t i = 0; i < train.dim; ++i) matrix[i * train.dim + i] = scale;
    }
    std::vector<double> offset = broadcast(map.get_double_list("generator.offset", {0.0}),
                                           train.dim, map, "generator.offset");
    train.generator = GeneratorSpec::linear(std::move(matrix), std::move(offset));
  } else if (generator_kind == "exact_ddim") {
    if (!has_mixture) map.reject("generator.kind", "exact_ddim needs a [mixture.*] section");
    train.schedule_steps = static_cast<int>(map.get_int("schedule.steps", 50));
    train.schedule_beta_min = map.get_double("schedule.beta_min", 1e-4);
    train.schedule_beta_max = map.get_double("schedule.beta_max", 0.02);
    const int stride = static_cast<int>(map.get_int("generator.stride", 1));
    NoiseSchedule schedule;
    try {
      schedule = make_linear_schedule(train.schedule_steps, train.schedule_beta_min,
                                      train.schedule_beta_max);
    } catch (const std::invalid_argument& err) {
      map.reject("schedule.steps", err.what());
    }
    try {
      train.generator = GeneratorSpec::exact_ddim(mixture, std::move(schedule), stride);
    } catch (const std::invalid_argument& err) {
      map.reject("generator.stride", err.what());
    }
  } else {
    map.reject("generator.kind", "unknown generator kind '" + generator_kind + "'");
  }
  train.generator.condition = map.get_string("generator.condition", "");

  train.reward = parse_reward(map, train.dim, has_mixture ? &mixture : nullptr);

  config.output_dir = map.get_string("output.dir", "out");
  if (config.output_dir.empty()) map.reject("output.dir", "output directory must be nonempty");
  config.log_every = static_cast<int>(map.get_int("output.log_every", 1));
  config.eval_samples = static_cast<int>(map.get_int("eval.samples", 1000));
  config.oracle_samples = static_cast<int>(map.get_int("oracle.samples", 100000));
  config.oracle_fd_step = map.get_double("oracle.fd_step", 1e-3);

  map.require_all_consumed();
  try {
    train.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(origin + ": " + err.what());
  }
  if (config.log_every < 1) throw ConfigError(origin + ": key 'output.log_every': must be >= 1");
  if (config.eval_samples < 1) throw ConfigError(origin + ": key 'eval.samples': must be >= 1");
  if (config.oracle_samples < 2) {
    throw ConfigError(origin + ": key 'oracle.samples': must be >= 2");
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::string serialize_config(const ExperimentConfig& config) {
  const TrainConfig& train = config.train;
  std::ostringstream out;
  out << "dim = " << train.dim << "\n";
  out << "seed = " << train.seed << "\n";
  out << "\n";
  out << "train.steps = " << train.total_steps << "\n";
  out << "train.batch_size = " << train.batch_size << "\n";
  out << "train.lr = " << format_double(train.lr) << "\n";
  out << "train.clip_margin = " << format_double(train.clip_margin) << "\n";
  out << "train.ratio_mode = "
      << (train.ratio_mode == RatioMode::kFull ? "full" : "per_dim_geo_mean") << "\n";
  out << "train.clip_style = " << (train.clip_style == ClipStyle::kDrop ? "drop" : "clamp")
      << "\n";
  out << "train.replay_window = " << train.replay_window << "\n";
  out << "train.inner_epochs = " << train.inner_epochs << "\n";
  out << "train.log_sigma_floor = " << format_double(train.log_sigma_floor) << "\n";
  out << "train.smooth_sigma = " << format_double(train.smooth_sigma) << "\n";
  out << "train.beta1 = " << format_double(train.adamw.beta1) << "\n";
  out << "train.beta2 = " << format_double(train.adamw.beta2) << "\n";
  out << "train.eps = " << format_double(train.adamw.eps) << "\n";
  out << "train.weight_decay = " << format_double(train.adamw.weight_decay) << "\n";
  out << "train.early_stop = " << (train.early_stop.enabled ? "true" : "false") << "\n";
  out << "train.early_stop_min_delta = " << format_double(train.early_stop.min_delta) << "\n";
  out << "train.early_stop_window = " << train.early_stop.window << "\n";
  out << "train.early_stop_min_iters = " << train.early_stop.min_iterations << "\n";
  out << "\n";
  out << "baseline.enabled = " << (train.baseline.enabled ? "true" : "false") << "\n";
  out << "baseline.hidden = " << train.baseline.hidden_width << "\n";
  out << "baseline.lr = " << format_double(train.baseline.lr) << "\n";
  out << "baseline.input = "
      << (train.baseline.input_mode == BaselineInput::kFullParams ? "full" : "summary") << "\n";
  out << "\n";

  const GaussianMixture* mixture = nullptr;
  if (train.generator.kind == GeneratorKind::kExactDdim) {
    mixture = &train.generator.mixture;
  } else if (train.reward.kind == RewardKind::kMixtureLogDensity ||
             train.reward.kind == RewardKind::kModeIndicator) {
    mixture = &train.reward.mixture;
  } else if (train.reward.kind == RewardKind::kWeightedSum) {
    for (const RewardSpec& term : train.reward.terms) {
      if (term.kind == RewardKind::kMixtureLogDensity ||
          term.kind == RewardKind::kModeIndicator) {
        mixture = &term.mixture;
        break;
      }
    }
  }
  if (mixture != nullptr) {
    out << "mixture.weights = " << format_list(mixture->weights) << "\n";
    for (std::size_t k = 0; k < mixture->component_count(); ++k) {
      out << "mixture.mean." << k << " = " << format_list(mixture->means[k]) << "\n";
      out << "mixture.std." << k << " = " << format_list(mixture->stds[k]) << "\n";
    }
    out << "\n";
  }

  switch (train.generator.kind) {
    case GeneratorKind::kIdentity:
      out << "generator.kind = identity\n";
      break;
    case GeneratorKind::kLinear:
      out << "generator.kind = linear\n";
      out << "generator.matrix = " << format_list(train.generator.matrix) << "\n";
      out << "generator.offset = " << format_list(train.generator.offset) << "\n";
      break;
    case GeneratorKind::kExactDdim:
      out << "generator.kind = exact_ddim\n";
      out << "generator.stride = " << train.generator.stride << "\n";
      out << "schedule.steps = " << train.schedule_steps << "\n";
      out << "schedule.beta_min = " << format_double(train.schedule_beta_min) << "\n";
      out << "schedule.beta_max = " << format_double(train.schedule_beta_max) << "\n";
      break;
  }
  if (!train.generator.condition.empty()) {
    out << "generator.condition = \"" << train.generator.condition << "\"\n";
  }
  out << "\n";

  auto emit_reward_leaf = [&out](const RewardSpec& spec, const std::string& prefix) {
    switch (spec.kind) {
      case RewardKind::kNegSquaredDistance:
        out << prefix << "kind = neg_sq_dist\n";
        out << prefix << "target = " << format_list(spec.target) << "\n";
        break;
      case RewardKind::kMixtureLogDensity:
        out << prefix << "kind = mixture_log_density\n";
        break;
      case RewardKind::kModeIndicator:
        out << prefix << "kind = mode_indicator\n";
        out << prefix << "component = " << spec.target_component << "\n";
        break;
      case RewardKind::kWeightedSum:
        break;
    }
  };
  if (train.reward.kind == RewardKind::kWeightedSum) {
    out << "reward.kind = weighted_sum\n";
    out << "reward.terms = " << train.reward.terms.size() << "\n";
    for (std::size_t i = 0; i < train.reward.terms.size(); ++i) {
      const std::string prefix = "reward.term." + std::to_string(i) + ".";
      emit_reward_leaf(train.reward.terms[i], prefix);
      out << prefix << "weight = " << format_double(train.reward.term_weights[i]) << "\n";
    }
  } else {
    emit_reward_leaf(train.reward, "reward.");
  }
  if (!train.reward.condition.empty()) {
    out << "reward.condition = \"" << train.reward.condition << "\"\n";
  }
  out << "reward.scale = " << format_double(train.reward.scale) << "\n";
  out << "reward.shift = " << format_double(train.reward.shift) << "\n";
  out << "\n";
  out << "output.dir = \"" << config.output_dir << "\"\n";
  out << "output.log_every = " << config.log_every << "\n";
  out << "eval.samples = " << config.eval_samples << "\n";
  out << "oracle.samples = " << config.oracle_samples << "\n";
  out << "oracle.fd_step = " << format_double(config.oracle_fd_step) << "\n";
  return out.str();
}

}  // namespace noisetuner
