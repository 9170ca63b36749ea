#pragma once

#include <string>

namespace kcgg {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

/// Level from KCGG_LOG_LEVEL in {error, info, debug}; defaults to info and
/// ignores unknown values. Read once per process.
LogLevel log_level();

void log_error(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

} // namespace kcgg
