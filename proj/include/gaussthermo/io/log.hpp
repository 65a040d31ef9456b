// Copyright 2026 The gaussthermo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Leveled diagnostics on standard error. The level comes from the
// GAUSSTHERMO_LOG environment variable (error|warn|info|debug, default warn).

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace gaussthermo::io {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

inline std::optional<LogLevel> parse_log_level(std::string_view s) {
  if (s == "error") return LogLevel::error;
  if (s == "warn") return LogLevel::warn;
  if (s == "info") return LogLevel::info;
  if (s == "debug") return LogLevel::debug;
  return std::nullopt;
}

class Logger {
 public:
  static Logger& instance() {
    static Logger logger;
    return logger;
  }

  void set_level(LogLevel l) { level_ = l; }
  LogLevel level() const { return level_; }
  bool enabled(LogLevel l) const { return static_cast<int>(l) <= static_cast<int>(level_); }

  void log(LogLevel l, std::string_view msg) {
    if (!enabled(l)) return;
    static constexpr std::string_view names[] = {"error", "warn", "info", "debug"};
    std::lock_guard lock(mutex_);
    std::cerr << "gaussthermo [" << names[static_cast<int>(l)] << "] " << msg << '\n';
  }

 private:
  Logger() {
    if (const char* env = std::getenv("GAUSSTHERMO_LOG")) {
      if (auto l = parse_log_level(env)) {
        level_ = *l;
      } else {
        std::cerr << "gaussthermo [warn] ignoring GAUSSTHERMO_LOG='" << env << "'\n";
      }
    }
  }

  LogLevel level_ = LogLevel::warn;
  std::mutex mutex_;
};

inline void log_error(std::string_view m) { Logger::instance().log(LogLevel::error, m); }
inline void log_warn(std::string_view m) { Logger::instance().log(LogLevel::warn, m); }
inline void log_info(std::string_view m) { Logger::instance().log(LogLevel::info, m); }
inline void log_debug(std::string_view m) { Logger::instance().log(LogLevel::debug, m); }

}  // namespace gaussthermo::io
