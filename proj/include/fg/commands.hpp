#pragma once

#include "fg/config.hpp"
#include "fg/inequalities.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace fg {

// Process exit codes shared by every command.
enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitBadConfig = 2, kExitRuntime = 3 };

struct RunOptions {
  std::optional<double> override_k;  // replaces K_eff for every N; falsification runs only
};

struct CommandResult {
  nlohmann::json report;
  int exit_code = kExitPass;
  std::string csv;  // flow series, empty for other commands
  std::string summary;  // one line for the terminal
};

// S_F, K_eff per N and measure statistics.
CommandResult cmd_space_describe(const ExperimentConfig& cfg);

// Flow from the configured u0 with fitted rates checked against 2KN/(N-1).
CommandResult cmd_flow_run(const ExperimentConfig& cfg, const RunOptions& opts = {});

// Selected checkers over the test bank for every N. Combinations outside a
// checker's range (K <= 0, finite-N-only checkers at N = inf, ...) are listed
// under "skipped". A checker error stops the run with exit code kExitRuntime
// and the partial report, with the message under "error".
CommandResult cmd_ineq_check(const ExperimentConfig& cfg, const RunOptions& opts = {});

// Residuals of the calculus identities and adjointness at two resolutions.
CommandResult cmd_identities(const ExperimentConfig& cfg);

nlohmann::json report_to_json(const CheckReport& r);

// Deterministic text: sorted keys, doubles with 17 significant digits,
// non-finite doubles as the strings "inf", "-inf", "nan".
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace fg
