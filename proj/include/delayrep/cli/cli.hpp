#pragma once

/**
 * @file cli.hpp
 * @brief The `delayrep` command-line front end.
 *
 * Subcommands: validate, convert, simulate, compare, demo and lemma-check.  Exit codes are
 * 0 on success, 1 for validation failures (including failed comparisons), 2 for numerical
 * failures and 3 for usage errors.  Failures print one line
 *   delayrep: error kind=<kind> code=<n> msg=<message>
 * on standard error.
 */

#include <string>
#include <vector>

namespace delayrep::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kNumericalFailure = 2, kUsageError = 3 };

int run(int argc, const char* const* argv);
/// args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace delayrep::cli
