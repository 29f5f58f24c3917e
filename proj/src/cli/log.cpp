#include "cli/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace fockphase::cli {

namespace {

LogLevel parse_level(const char* text) {
  if (text == nullptr) return LogLevel::warn;
  const std::string v(text);
  if (v == "quiet" || v == "off" || v == "0") return LogLevel::quiet;
  if (v == "error") return LogLevel::error;
  if (v == "info") return LogLevel::info;
  if (v == "debug") return LogLevel::debug;
  return LogLevel::warn;
}

const char* label(LogLevel level) {
  switch (level) {
    case LogLevel::error: return "error";
    case LogLevel::warn: return "warn";
    case LogLevel::info: return "info";
    case LogLevel::debug: return "debug";
    case LogLevel::quiet: break;
  }
  return "";
}

}  // namespace

LogLevel log_level() {
  static const LogLevel level = parse_level(std::getenv("FOCKPHASE_LOG"));
  return level;
}

void log(LogLevel level, std::string_view message) {
  if (level == LogLevel::quiet || level > log_level()) return;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  std::cerr << "fockphase [" << label(level) << "] " << message << '\n';
}

}  // namespace fockphase::cli
