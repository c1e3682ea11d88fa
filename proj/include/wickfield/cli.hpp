#pragma once

#include "wickfield/error.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace wickfield::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitBudget = 3,
    kExitNumeric = 4,
};

/// A configuration value is missing, mistyped or out of range.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field))
    {
    }
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Runs the command line `args` (args[0] is the program name). Diagnostics
/// go to `err` as one JSON object; progress lines go to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wickfield::cli
