#ifndef NOISETUNER_LOG_HPP_
#define NOISETUNER_LOG_HPP_

#include <string>

namespace noisetuner {

enum class LogLevel {
  kError = 0,
  kInfo = 1,
  kDebug = 2,
};

// Process-wide level, initialized from NOISE_TUNER_LOG={error|info|debug}
// on first use (default: info). Messages go to stderr.
LogLevel log_level();
void set_log_level(LogLevel level);
void log_message(LogLevel level, const std::string& message);

}  // namespace noisetuner

#define NT_LOG_ERROR(msg) ::noisetuner::log_message(::noisetuner::LogLevel::kError, (msg))
#define NT_LOG_INFO(msg) ::noisetuner::log_message(::noisetuner::LogLevel::kInfo, (msg))
#define NT_LOG_DEBUG(msg) ::noisetuner::log_message(::noisetuner::LogLevel::kDebug, (msg))

#endif  // NOISETUNER_LOG_HPP_
