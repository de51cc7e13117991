#pragma once

/**
 * @file log.hpp
 * @brief Diagnostics on standard error, filtered by the DELAYREP_LOG environment variable
 * (error, info or debug; default error).
 */

#include <string>

namespace delayrep::logging {

enum class Level { Error = 0, Info = 1, Debug = 2 };

/// Level parsed from DELAYREP_LOG once per process.
Level level();
void set_level(Level level);

void error(const std::string& message);
void info(const std::string& message);
void debug(const std::string& message);

}  // namespace delayrep::logging
