#pragma once

// Command-line front end: strict JSON config parsing with explicit defaults,
// command dispatch, deterministic CSV/JSON emission, and a parallel sweep
// runner.  Identical configs produce byte-identical outputs.

#include <string>

#include "rheograph/model_io.hpp"

namespace rheo {

// Names accepted by the `command` field / subcommand dispatch.
bool known_command(const std::string& command);

// Fill every omitted field of a raw config fragment for `command` with its
// documented default and reject unknown or ill-typed fields (InvalidConfig).
// The result always carries "command" and every schema key.
json normalize_config(const json& raw, const std::string& command);

struct RunResult {
  bool converged = true;  // false: solver gave up, partial report was flagged
  json summary;           // per-command scalars picked up by sweep rows
};

// Execute one fully-normalized config, writing its declared outputs (paths
// taken relative to config["out_dir"], written atomically).
RunResult run_config(const json& config);

// argv-level entry point used by the binary: parses flags, merges the
// optional --config file with flag overrides, dispatches, and maps thrown
// Error codes onto exit codes (0 ok, 2 invalid input, 3 no convergence)
// with a machine-readable JSON diagnostic on standard error.
int cli_main(int argc, char** argv);

}  // namespace rheo
