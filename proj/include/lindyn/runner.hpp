#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace lindyn {

struct RunOptions {
  std::string command;  // chains | shadow | mixing | l1demo | fhc | certify
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;    // overrides the config seed
  std::optional<std::int64_t> horizon;  // overrides the config horizon
};

// 0: every certificate verified. 1: a certificate failed. 2: config or input
// could not be parsed/validated. 3: the operator lacks a needed capability.
struct RunResult {
  int exit_code = 0;
  std::string message;  // first failure description, empty on success
};

// Runs one experiment: reads the config, dispatches to the library, writes
// <out>/certificates.csv and <out>/report.md. Identical config + seed gives
// byte-identical artifacts (no timestamps, no locale, no floating point).
RunResult run_experiment(const RunOptions& options);

}  // namespace lindyn
