#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "srcf/cli/config.hpp"
#include "srcf/cli/report_io.hpp"

namespace srcf::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitDiverged = 3,
};

/// Runs the benchmark described by `config` and returns its report.
Report run_benchmark(const BenchConfig& config);

/// True when some scheme diverged on every run.
bool fully_diverged(const Report& report);

/// Entry point behind the srcf executable; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& err);

}  // namespace srcf::cli
