#pragma once

#include <iosfwd>
#include <vector>

#include "config.hpp"
#include "rsc/csv.hpp"
#include "rsc/solution.hpp"

namespace rsc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitSingular = 3,
  kExitInfeasible = 4,
  kExitDivergence = 5,
};

/// Each command writes its files into c.out_dir (created when missing),
/// prints a short summary to `out` and returns an exit code.
int cmd_solve(const RunConfig& c, std::ostream& out);
int cmd_sweep(const RunConfig& c, std::ostream& out);
int cmd_propositions(const RunConfig& c, std::ostream& out);
int cmd_crosscheck(const RunConfig& c, std::ostream& out);

/// One row per solution, headers named after the Solution fields.
CsvTable solution_table(const std::vector<Solution>& solutions);

}  // namespace rsc::cli
