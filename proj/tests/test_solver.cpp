// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <sstream>

#include "doctest.h"
#include "netlift/sat/dimacs.hpp"
#include "netlift/sat/solver.hpp"

using namespace netlift::sat;

namespace {

// Tries all 2^n assignments; the ground truth the solver must agree with.
bool brute_force_satisfiable(int n_vars, const std::vector<std::vector<lit>>& clauses) {
  for (unsigned m = 0; m < (1u << n_vars); ++m) {
    bool ok = true;
    for (const auto& c : clauses) {
      bool sat = false;
      for (lit l : c)
        if ((((m >> lit_var(l)) & 1u) != 0) != lit_sign(l)) {
          sat = true;
          break;
        }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

bool model_satisfies(const solver& s, const std::vector<std::vector<lit>>& clauses) {
  for (const auto& c : clauses) {
    bool sat = false;
    for (lit l : c)
      if (s.model_value(l)) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

std::vector<std::vector<lit>> random_cnf(std::mt19937_64& rng, int n_vars, int n_clauses,
                                         int width) {
  std::vector<std::vector<lit>> cs;
  for (int i = 0; i < n_clauses; ++i) {
    std::vector<lit> c;
    for (int j = 0; j < width; ++j)
      c.push_back(make_lit(static_cast<var>(rng() % n_vars), rng() & 1));
    cs.push_back(std::move(c));
  }
  return cs;
}

// Pigeonhole: p+1 pigeons into p holes, unsatisfiable; stresses learning.
std::vector<std::vector<lit>> pigeonhole(solver& s, int holes) {
  int pigeons = holes + 1;
  std::vector<std::vector<var>> x(pigeons, std::vector<var>(holes));
  for (auto& row : x)
    for (var& v : row) v = s.new_var();
  std::vector<std::vector<lit>> cs;
  for (int i = 0; i < pigeons; ++i) {
    std::vector<lit> c;
    for (int j = 0; j < holes; ++j) c.push_back(make_lit(x[i][j]));
    cs.push_back(c);
  }
  for (int j = 0; j < holes; ++j)
    for (int i = 0; i < pigeons; ++i)
      for (int k = i + 1; k < pigeons; ++k)
        cs.push_back({make_lit(x[i][j], true), make_lit(x[k][j], true)});
  return cs;
}

}  // namespace

TEST_CASE("literal encoding") {
  lit a = make_lit(3), na = make_lit(3, true);
  CHECK(a != na);
  CHECK(~a == na);
  CHECK(lit_var(na) == 3);
  CHECK(lit_sign(na));
  CHECK(!lit_sign(a));
}

TEST_CASE("trivial formulas") {
  solver s;
  var a = s.new_var(), b = s.new_var();
  CHECK(s.solve() == solve_status::sat);
  CHECK(s.add_clause({make_lit(a)}));
  CHECK(s.add_clause({make_lit(a, true), make_lit(b)}));
  CHECK(s.solve() == solve_status::sat);
  CHECK(s.model_value(a));
  CHECK(s.model_value(b));
  CHECK(!s.add_clause({make_lit(b, true)}));  // contradiction at the top level
  CHECK(!s.okay());
  CHECK(s.solve() == solve_status::unsat);
}

TEST_CASE("tautologies and duplicate literals are handled") {
  solver s;
  var a = s.new_var(), b = s.new_var();
  CHECK(s.add_clause({make_lit(a), make_lit(a, true)}));  // tautology dropped
  CHECK(s.add_clause({make_lit(b), make_lit(b), make_lit(b)}));
  CHECK(s.solve() == solve_status::sat);
  CHECK(s.model_value(b));
}

TEST_CASE("agrees with brute force on random 3-CNF across densities") {
  std::mt19937_64 rng(12345);
  int sat_seen = 0, unsat_seen = 0;
  for (int round = 0; round < 120; ++round) {
    int n_vars = 5 + static_cast<int>(rng() % 6);              // 5..10
    int n_clauses = static_cast<int>(n_vars * (2 + rng() % 4)); // ratio 2..5
    auto cs = random_cnf(rng, n_vars, n_clauses, 3);
    solver s;
    for (int i = 0; i < n_vars; ++i) s.new_var();
    bool top_level_ok = true;
    for (const auto& c : cs) top_level_ok = s.add_clause(c) && top_level_ok;
    bool expect = brute_force_satisfiable(n_vars, cs);
    solve_status got = s.solve();
    REQUIRE(got == (expect ? solve_status::sat : solve_status::unsat));
    if (expect) {
      CHECK(model_satisfies(s, cs));
      ++sat_seen;
    } else {
      ++unsat_seen;
    }
  }
  // the density sweep must actually exercise both outcomes
  CHECK(sat_seen > 20);
  CHECK(unsat_seen > 20);
}

TEST_CASE("agrees with brute force under assumptions") {
  std::mt19937_64 rng(777);
  for (int round = 0; round < 60; ++round) {
    int n_vars = 5 + static_cast<int>(rng() % 4);
    auto cs = random_cnf(rng, n_vars, n_vars * 3, 3);
    solver s;
    for (int i = 0; i < n_vars; ++i) s.new_var();
    for (const auto& c : cs) s.add_clause(c);
    if (!s.okay()) continue;
    std::vector<lit> assume = {make_lit(static_cast<var>(rng() % n_vars), rng() & 1),
                               make_lit(static_cast<var>(rng() % n_vars), rng() & 1)};
    auto with_assumed = cs;
    for (lit l : assume) with_assumed.push_back({l});
    bool expect = brute_force_satisfiable(n_vars, with_assumed);
    solve_status got = s.solve(assume);
    REQUIRE(got == (expect ? solve_status::sat : solve_status::unsat));
    if (expect) {
      CHECK(model_satisfies(s, with_assumed));
    } else {
      // assumptions do not poison the unassumed formula
      CHECK(s.solve() == (brute_force_satisfiable(n_vars, cs) ? solve_status::sat
                                                              : solve_status::unsat));
    }
  }
}

TEST_CASE("incremental clause addition between solves") {
  std::mt19937_64 rng(4242);
  for (int round = 0; round < 30; ++round) {
    int n_vars = 6;
    auto all = random_cnf(rng, n_vars, 24, 3);
    solver s;
    for (int i = 0; i < n_vars; ++i) s.new_var();
    std::vector<std::vector<lit>> so_far;
    for (size_t batch = 0; batch < all.size(); batch += 6) {
      for (size_t i = batch; i < batch + 6 && i < all.size(); ++i) {
        s.add_clause(all[i]);
        so_far.push_back(all[i]);
      }
      bool expect = brute_force_satisfiable(n_vars, so_far);
      REQUIRE(s.solve() == (expect ? solve_status::sat : solve_status::unsat));
      if (!expect) break;
    }
  }
}

TEST_CASE("pigeonhole instances are unsatisfiable") {
  for (int holes : {3, 4, 5}) {
    solver s;
    auto cs = pigeonhole(s, holes);
    for (const auto& c : cs) s.add_clause(c);
    CHECK(s.solve() == solve_status::unsat);
    if (holes == 5) CHECK(s.stats().conflicts > 20);  // real search happened
  }
}

TEST_CASE("conflict budget yields unknown") {
  solver s;
  auto cs = pigeonhole(s, 8);
  for (const auto& c : cs) s.add_clause(c);
  solve_limits limits;
  limits.max_conflicts = 5;
  CHECK(s.solve({}, limits) == solve_status::unknown);
  // and the solver remains usable afterwards
  CHECK(s.solve() == solve_status::unsat);
}

TEST_CASE("expired deadline yields unknown") {
  solver s;
  auto cs = pigeonhole(s, 9);
  for (const auto& c : cs) s.add_clause(c);
  solve_limits limits;
  limits.deadline = std::chrono::steady_clock::now();
  CHECK(s.solve({}, limits) == solve_status::unknown);
}

TEST_CASE("seeded runs are deterministic") {
  auto run = [](uint64_t seed) {
    std::mt19937_64 rng(99);
    auto cs = random_cnf(rng, 30, 120, 3);
    solver s;
    s.set_seed(seed);
    for (int i = 0; i < 30; ++i) s.new_var();
    for (const auto& c : cs) s.add_clause(c);
    s.solve();
    return s.stats().decisions;
  };
  CHECK(run(7) == run(7));
  CHECK(run(8) == run(8));
}

TEST_CASE("DIMACS writing and parsing round-trip") {
  std::vector<std::vector<lit>> cs = {{make_lit(0), make_lit(1, true)},
                                      {make_lit(2)},
                                      {make_lit(0, true), make_lit(1), make_lit(2, true)}};
  std::ostringstream out;
  write_dimacs(out, 3, cs, {"note one", "note two"});
  std::string text = out.str();
  CHECK(text.find("p cnf 3 3") != std::string::npos);
  CHECK(text.find("c note one") != std::string::npos);

  std::istringstream in(text);
  dimacs_problem p = parse_dimacs(in);
  CHECK(p.n_vars == 3);
  REQUIRE(p.clauses.size() == 3);
  CHECK(p.clauses[0] == cs[0]);
  CHECK(p.clauses[2] == cs[2]);
}

TEST_CASE("DIMACS parse errors") {
  auto bad = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS(parse_dimacs(in));
  };
  bad("1 2 0\n");                  // clause before header
  bad("p cnf 2 1\n1 3 0\n");       // literal out of range
  bad("p cnf 2 1\n1 2\n");         // unterminated clause
}

TEST_CASE("solver output parsing") {
  {
    std::istringstream in("c chatter\ns SATISFIABLE\nv 1 -2 0\n");
    dimacs_result r = parse_solver_output(in, 2);
    CHECK(r.status == solve_status::sat);
    REQUIRE(r.model.size() == 2);
    CHECK(r.model[0]);
    CHECK(!r.model[1]);
  }
  {
    std::istringstream in("s UNSATISFIABLE\n");
    CHECK(parse_solver_output(in, 2).status == solve_status::unsat);
  }
  {
    std::istringstream in("s UNKNOWN\n");
    CHECK(parse_solver_output(in, 2).status == solve_status::unknown);
  }
  {
    std::istringstream in("no verdict here\n");
    CHECK_THROWS(parse_solver_output(in, 2));
  }
}
