#pragma once

// Subcommand dispatcher shared by the command-line tool and the C API.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "domes/error.hpp"

namespace domes {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitValidation = 3,
  kExitNumeric = 4,
  kExitIo = 5,
};

int exit_code_for(ErrorKind kind);

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::string output;         // mesh, periodic JSON or patch, depending on the subcommand
  std::string report;         // run report; stdout when empty
  std::string format;         // mesh format override; from the extension when empty
  std::string plan;           // flip plan file
  double eps = 1e-2;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int max_multiplier = 100000;
  int n = 0;
  int r = 1;
  double theta0 = 0.2;
  double bound = 1.5;
  double target = 1e-3;
  double perturb = 0.0;       // seeded generic perturbation before planarize/pack
  int patch = 0;
  double a = 1.0;
  int m = 1;
  bool accordion = false;
  bool path_following = false;
  bool align = false;
  int verbosity = 0;
};

/// Runs one subcommand; writes artifacts and the run report.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses the command line into a RunConfig and runs it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace domes
