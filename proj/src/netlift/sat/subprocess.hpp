// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "netlift/sat/dimacs.hpp"

namespace netlift::sat {

// One-shot solve through an external DIMACS solver command. The command
// receives the CNF path as its last argument and must print a SAT-competition
// style verdict ("s SATISFIABLE" + "v" model lines, or "s UNSATISFIABLE").
// Assumptions are appended to the formula as unit clauses. Returns unknown
// when the deadline passes or the command fails to produce a verdict.
dimacs_result solve_via_command(const std::string& command, int n_vars,
                                const std::vector<std::vector<lit>>& clauses,
                                const std::vector<lit>& assumptions, solve_limits limits);

}  // namespace netlift::sat
