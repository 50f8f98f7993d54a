#ifndef CSANITIZE_LOG_HPP
#define CSANITIZE_LOG_HPP

#include <iostream>
#include <sstream>
#include <string>

namespace csan::log {

enum class Level { off = 0, error = 1, warn = 2, info = 3, debug = 4 };

// Verbosity comes from the CSANITIZE_LOG environment variable
// (off|error|warn|info|debug); default is warn.
Level threshold();
void set_threshold(Level level);

void write(Level level, const std::string& message);

template <typename... Args>
void emit(Level level, Args&&... args) {
  if (level > threshold()) return;
  std::ostringstream os;
  (os << ... << args);
  write(level, os.str());
}

template <typename... Args>
void error(Args&&... args) {
  emit(Level::error, std::forward<Args>(args)...);
}
template <typename... Args>
void warn(Args&&... args) {
  emit(Level::warn, std::forward<Args>(args)...);
}
template <typename... Args>
void info(Args&&... args) {
  emit(Level::info, std::forward<Args>(args)...);
}
template <typename... Args>
void debug(Args&&... args) {
  emit(Level::debug, std::forward<Args>(args)...);
}

}  // namespace csan::log

#endif  // CSANITIZE_LOG_HPP
