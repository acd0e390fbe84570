#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "subpop/harness.hpp"

namespace subpop::cli {

/// Scenario file problem: parse error (with line/column) or a violated
/// invariant (with the offending field).
class ScenarioError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

ScenarioSpec scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const ScenarioSpec& spec);

ScenarioSpec parse_scenario(const std::string& text);
ScenarioSpec load_scenario(const std::filesystem::path& path);

/// A builtin name or a path to a scenario file.
ScenarioSpec resolve_scenario(const std::string& name_or_path);

}  // namespace subpop::cli
