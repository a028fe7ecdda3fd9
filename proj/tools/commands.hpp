#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "run_config.hpp"

namespace inceprop::cli {

enum class Command { SolveMu, ClassifyInce, Green, Propagate, Eigenstates, Validate };

std::optional<Command> command_from_string(std::string_view name);

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kValidationFailed = 2 };

/// Writes the command's artifacts into `out` (created if missing). Returns
/// false only when a validation battery ran and failed. `jobs` is used by
/// `validate` for independent criteria.
bool run_command(Command command, const RunConfig& config,
                 const std::filesystem::path& out, int jobs, std::ostream& log);

/// Parses the document, expands the sweep (if any) and runs every entry,
/// up to `jobs` at a time. Each sweep entry writes into out/sweep_NNN.
/// Errors are reported on `err` and mapped to exit codes.
int execute(Command command, const nlohmann::json& doc,
            const std::filesystem::path& out, int jobs, std::ostream& log,
            std::ostream& err);

}  // namespace inceprop::cli
