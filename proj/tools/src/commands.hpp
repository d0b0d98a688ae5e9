#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace onsager::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalError = 2, kValidationFailure = 3 };

// Each command writes its payload to out and diagnostics to err, and returns the exit code.
// ConfigError and onsager::Error propagate; run_command maps them to exit codes.
int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_geodesic(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_transport(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Dispatches by name, opening cfg.out when set, and converts errors to exit codes.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err);

// "%.17g"
std::string fmt(double x);

}  // namespace onsager::cli
