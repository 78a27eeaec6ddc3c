#pragma once

#include <optional>
#include <string>

#include "fermimirror/config.hpp"
#include "fermimirror/runio.hpp"

namespace fermimirror {

// Command-line overrides applied on top of the config file.
struct CliOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> eta_over_kappa;
  std::optional<double> from, to;
  std::optional<int> steps;
  std::optional<double> omega_from_hz, omega_to_hz;
  bool strict = false;
};

// Exit codes: 0 ok, 2 config error, 3 numeric failure, 4 regime fail
// (with --strict only).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitRegime = 4;

struct RegimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Executes one subcommand (`model`, `steady`, `sweep`, `threshold`,
/// `spectrum`, `simulate`, `edcheck`), writes its CSV/JSON outputs plus the
/// run-record sidecar into the output directory, and returns the record.
/// Errors propagate as exceptions; map_exit_code translates them.
RunRecord run_command(const std::string& command, const RunConfig& cfg,
                      const CliOverrides& ov);

int map_exit_code(const std::exception& e);

}  // namespace fermimirror
