#include "csanitize/log.hpp"

#include <cstdlib>
#include <mutex>

namespace csan::log {

namespace {

Level parse_level(const char* value) {
  if (value == nullptr) return Level::warn;
  std::string v(value);
  if (v == "off" || v == "0" || v == "none") return Level::off;
  if (v == "error") return Level::error;
  if (v == "warn" || v == "warning") return Level::warn;
  if (v == "info") return Level::info;
  if (v == "debug") return Level::debug;
  return Level::warn;
}

Level& threshold_ref() {
  static Level level = parse_level(std::getenv("CSANITIZE_LOG"));
  return level;
}

const char* tag(Level level) {
  switch (level) {
    case Level::error: return "error";
    case Level::warn: return "warn";
    case Level::info: return "info";
    case Level::debug: return "debug";
    default: return "?";
  }
}

std::mutex& out_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Level threshold() { return threshold_ref(); }

void set_threshold(Level level) { threshold_ref() = level; }

void write(Level level, const std::string& message) {
  std::lock_guard<std::mutex> lock(out_mutex());
  std::cerr << "csanitize [" << tag(level) << "] " << message << "\n";
}

}  // namespace csan::log
