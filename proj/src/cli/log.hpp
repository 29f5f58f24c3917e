#pragma once

#include <string_view>

namespace fockphase::cli {

enum class LogLevel { quiet = 0, error, warn, info, debug };

/// Level from FOCKPHASE_LOG (quiet|error|warn|info|debug), default warn.
LogLevel log_level();

/// Writes one line to stderr when `level` is enabled. Thread safe.
void log(LogLevel level, std::string_view message);

}  // namespace fockphase::cli
