#pragma once

#include <cstdint>
#include <iostream>
#include <string>

#include "urnlab/verify.hpp"

namespace urnlab {

/// Exit codes shared by all subcommands.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitInputError = 2;

struct AnalyzeOptions {
  std::string input;
  std::string output;  // empty: write the JSON report to stdout
};

struct SimulateOptions {
  std::string input;
  std::uint64_t steps = 1u << 20;
  std::uint64_t reps = 1;
  std::uint64_t seed = 1;
  std::string checkpoints = "pow2";  // "pow2" or comma-separated N values
  unsigned threads = 0;              // 0: hardware default
  std::string out_dir = "traces";
};

struct VerifyCmdOptions {
  std::string input;
  std::uint64_t steps = 1u << 20;
  std::uint64_t reps = 20;
  std::uint64_t seed = 1;
  std::string checkpoints = "pow2";
  unsigned threads = 0;
  std::string output;  // empty: stdout only
  VerifyOptions tolerances;
};

/// Run the structural pipeline and emit the analysis report. Returns 0 on
/// success, 2 on any input error (nothing is written in that case).
int cmd_analyze(const AnalyzeOptions& options, std::ostream& out = std::cout,
                std::ostream& err = std::cerr);

/// Simulate replications and write one CSV per replication plus an aggregate
/// CSV into the output directory. Deterministic for fixed arguments.
int cmd_simulate(const SimulateOptions& options, std::ostream& out = std::cout,
                 std::ostream& err = std::cerr);

/// Fresh simulations plus the expectation oracle, compared against the
/// predictions. Returns 0 iff every enabled check passes its tolerance.
int cmd_verify(const VerifyCmdOptions& options, std::ostream& out = std::cout,
               std::ostream& err = std::cerr);

}  // namespace urnlab
