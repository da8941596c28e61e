#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "pdsys/config.hpp"
#include "pdsys/error.hpp"

namespace pdsys {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitPass = 0,
  kExitNegative = 1,       // the analysis ran and the property fails
  kExitConfig = 2,         // unreadable or invalid configuration
  kExitUnknownModel = 3,
  kExitNumerical = 4,      // a numerical precondition failed
  kExitCfl = 5,
  kExitBlowup = 6,
};

int exit_code_for(ErrorCode code);

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir = "out";
  unsigned threads = 0;                  // 0: hardware concurrency
  std::optional<std::uint64_t> seed;     // overrides [sim] seed
};

struct CommandResult {
  int exit_code = kExitPass;
  std::string summary;  // key = value lines, also written to the output directory
};

/// Kalman test over the sphere. Writes sk_report.csv and sk_summary.txt.
CommandResult cmd_check_sk(const CommandOptions& options);
/// Decay-rate envelope along one direction. Writes rate_envelope.csv and
/// decay_rate_summary.txt.
CommandResult cmd_decay_rate(const CommandOptions& options);
/// Linear (or nonlinear NS) run. Writes trajectory/ (field files and
/// trajectory.csv), norms.csv, decay_fit.csv and simulate_summary.txt.
CommandResult cmd_simulate(const CommandOptions& options);

/// Runs one command by name, turning errors into exit codes and messages.
CommandResult run_command(const std::string& name, const CommandOptions& options);

}  // namespace pdsys
