#pragma once

#include <json.hpp>

#include <ostream>

namespace wickfield::cli {

// Each command validates the whole configuration before computing, writes
// its outputs plus manifest.json under "out", and returns an exit code.
int cmd_sample(const nlohmann::json& config, std::ostream& log);
int cmd_moments(const nlohmann::json& config, std::ostream& log);
int cmd_counterexample(const nlohmann::json& config, std::ostream& log);
int cmd_converge(const nlohmann::json& config, std::ostream& log);
int cmd_solve(const nlohmann::json& config, std::ostream& log);

} // namespace wickfield::cli
