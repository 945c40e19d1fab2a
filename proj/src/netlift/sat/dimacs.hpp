// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "netlift/sat/solver.hpp"

namespace netlift::sat {

void write_dimacs(std::ostream& out, int n_vars, const std::vector<std::vector<lit>>& clauses,
                  const std::vector<std::string>& comments = {});

struct dimacs_problem {
  int n_vars = 0;
  std::vector<std::vector<lit>> clauses;
};

// Parses standard DIMACS CNF; throws std::runtime_error on malformed input.
dimacs_problem parse_dimacs(std::istream& in);

// Parses a SAT-competition style result ("s ..." verdict line, "v ..." model
// lines). Model is indexed by variable, false for unmentioned variables.
struct dimacs_result {
  solve_status status = solve_status::unknown;
  std::vector<bool> model;
};
dimacs_result parse_solver_output(std::istream& in, int n_vars);

}  // namespace netlift::sat
