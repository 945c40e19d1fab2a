// SPDX-License-Identifier: Apache-2.0
#include "netlift/sat/dimacs.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace netlift::sat {

void write_dimacs(std::ostream& out, int n_vars, const std::vector<std::vector<lit>>& clauses,
                  const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << "c " << c << '\n';
  out << "p cnf " << n_vars << ' ' << clauses.size() << '\n';
  for (const std::vector<lit>& cl : clauses) {
    for (lit l : cl) out << (lit_sign(l) ? -(lit_var(l) + 1) : lit_var(l) + 1) << ' ';
    out << "0\n";
  }
}

dimacs_problem parse_dimacs(std::istream& in) {
  dimacs_problem p;
  long declared_clauses = -1;
  std::string line;
  std::vector<lit> cur;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      std::istringstream ss(line);
      std::string tok, fmt;
      ss >> tok >> fmt >> p.n_vars >> declared_clauses;
      if (fmt != "cnf" || !ss) throw std::runtime_error("malformed DIMACS problem line");
      continue;
    }
    std::istringstream ss(line);
    long v;
    while (ss >> v) {
      if (v == 0) {
        p.clauses.push_back(cur);
        cur.clear();
      } else {
        long av = v < 0 ? -v : v;
        if (av > p.n_vars) throw std::runtime_error("DIMACS literal out of declared range");
        cur.push_back(make_lit(static_cast<var>(av - 1), v < 0));
      }
    }
  }
  if (!cur.empty()) throw std::runtime_error("unterminated DIMACS clause");
  if (declared_clauses < 0) throw std::runtime_error("missing DIMACS problem line");
  return p;
}

dimacs_result parse_solver_output(std::istream& in, int n_vars) {
  dimacs_result r;
  r.model.assign(n_vars, false);
  bool have_status = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("s ", 0) == 0) {
      std::string verdict = line.substr(2);
      while (!verdict.empty() && (verdict.back() == '\r' || verdict.back() == ' '))
        verdict.pop_back();
      if (verdict == "SATISFIABLE")
        r.status = solve_status::sat;
      else if (verdict == "UNSATISFIABLE")
        r.status = solve_status::unsat;
      else
        r.status = solve_status::unknown;
      have_status = true;
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream ss(line.substr(2));
      long v;
      while (ss >> v) {
        if (v == 0) continue;
        long av = v < 0 ? -v : v;
        if (av <= n_vars) r.model[av - 1] = v > 0;
      }
    }
  }
  if (!have_status) throw std::runtime_error("external solver produced no 's' verdict line");
  return r;
}

}  // namespace netlift::sat
