#include "noisetuner/log.hpp"

#include <cstdlib>
#include <iostream>

namespace noisetuner {

namespace {

LogLevel parse_env_level() {
  const char* env = std::getenv("NOISE_TUNER_LOG");
  if (env == nullptr) return LogLevel::kInfo;
  const std::string value(env);
  if (value == "error") return LogLevel::kError;
  if (value == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

LogLevel& current_level() {
  static LogLevel level = parse_env_level();
  return level;
}

}  // namespace

LogLevel log_level() { return current_level(); }

void set_log_level(LogLevel level) { current_level() = level; }

void log_message(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) > static_cast<int>(current_level())) return;
  const char* tag = level == LogLevel::kError ? "error" : level == LogLevel::kInfo ? "info" : "debug";
  std::cerr << "[" << tag << "] " << message << "\n";
}

}  // namespace noisetuner
