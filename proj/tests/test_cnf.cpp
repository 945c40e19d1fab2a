// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <bitset>
#include <sstream>

#include "doctest.h"
#include "netlift/cnf.hpp"
#include "netlift/sat/dimacs.hpp"

using namespace netlift;
using sat::lit;
using sat::solve_status;

namespace {

// Enumerates every model over `base` by repeated solving with blocking
// clauses; returns the set of assignments as bitmasks.
std::vector<unsigned> enumerate_models(cnf_builder& b, const std::vector<lit>& base) {
  std::vector<unsigned> models;
  while (b.solve() == solve_status::sat) {
    unsigned m = 0;
    std::vector<lit> block;
    for (size_t i = 0; i < base.size(); ++i) {
      bool v = b.model(base[i]);
      if (v) m |= 1u << i;
      block.push_back(v ? ~base[i] : base[i]);
    }
    models.push_back(m);
    b.add_clause(block);
    REQUIRE(models.size() < 5000);
  }
  return models;
}

std::vector<lit> fresh(cnf_builder& b, int n, var_role role = var_role::io) {
  std::vector<lit> xs;
  for (int i = 0; i < n; ++i) xs.push_back(b.new_lit(role));
  return xs;
}

}  // namespace

TEST_CASE("constants") {
  cnf_builder b;
  CHECK(b.solve() == solve_status::sat);
  lit t = b.ctrue();
  CHECK(b.ctrue() == t);  // allocated once
  CHECK(b.solve() == solve_status::sat);
  CHECK(b.model(t));
  CHECK(!b.model(b.cfalse()));
  CHECK(b.model(b.constant(true)));
  CHECK(b.solve({b.cfalse()}) == solve_status::unsat);
}

TEST_CASE("mk_or and mk_and match their truth tables") {
  for (int n : {1, 2, 3}) {
    cnf_builder b;
    auto xs = fresh(b, n);
    lit o = b.mk_or(xs, var_role::io);
    lit a = b.mk_and(xs, var_role::io);
    for (unsigned m = 0; m < (1u << n); ++m) {
      std::vector<lit> assume;
      for (int i = 0; i < n; ++i) assume.push_back((m >> i) & 1 ? xs[i] : ~xs[i]);
      REQUIRE(b.solve(assume) == solve_status::sat);
      CHECK(b.model(o) == (m != 0));
      CHECK(b.model(a) == (m == (1u << n) - 1));
    }
  }
  cnf_builder b;
  CHECK(b.solve({b.mk_or({}, var_role::io)}) == solve_status::unsat);  // empty or = false
  CHECK(b.solve({~b.mk_and({}, var_role::io)}) == solve_status::unsat);
}

TEST_CASE("cardinality constraints admit exactly the right models") {
  auto count_models = [](int n, auto&& constrain) {
    cnf_builder b;
    auto xs = fresh(b, n);
    constrain(b, xs);
    return enumerate_models(b, xs);
  };
  auto popcount_at_most = [](const std::vector<unsigned>& ms, int k) {
    for (unsigned m : ms)
      if (static_cast<int>(std::bitset<32>(m).count()) > k) return false;
    return true;
  };

  SUBCASE("at_most_one, pairwise regime") {
    auto ms = count_models(4, [](cnf_builder& b, auto& xs) {
      b.at_most_one(xs, var_role::io);
    });
    CHECK(ms.size() == 5);  // empty + 4 singletons
    CHECK(popcount_at_most(ms, 1));
  }
  SUBCASE("at_most_one, sequential regime") {
    auto ms = count_models(33, [](cnf_builder& b, auto& xs) {
      b.at_most_one(xs, var_role::io);
    });
    CHECK(ms.size() == 34);
    CHECK(popcount_at_most(ms, 1));
  }
  SUBCASE("exactly_one") {
    auto ms = count_models(5, [](cnf_builder& b, auto& xs) {
      b.exactly_one(xs, var_role::io);
    });
    CHECK(ms.size() == 5);
    for (unsigned m : ms) CHECK(std::bitset<32>(m).count() == 1);
  }
  SUBCASE("at_most_k") {
    auto ms = count_models(6, [](cnf_builder& b, auto& xs) {
      b.at_most_k(xs, 2, var_role::io);
    });
    CHECK(ms.size() == 1 + 6 + 15);  // C(6,0)+C(6,1)+C(6,2)
    CHECK(popcount_at_most(ms, 2));
  }
  SUBCASE("at_most_k with k >= n is unconstrained") {
    auto ms = count_models(3, [](cnf_builder& b, auto& xs) {
      b.at_most_k(xs, 5, var_role::io);
    });
    CHECK(ms.size() == 8);
  }
}

TEST_CASE("statistics track variables by role") {
  cnf_builder b;
  fresh(b, 3, var_role::function);
  fresh(b, 2, var_role::connection);
  fresh(b, 1, var_role::fault);
  const cnf_stats& s = b.stats();
  CHECK(s.vars == 6);
  CHECK(s.vars_by_role[static_cast<int>(var_role::function)] == 3);
  CHECK(s.vars_by_role[static_cast<int>(var_role::connection)] == 2);
  CHECK(s.vars_by_role[static_cast<int>(var_role::fault)] == 1);
  int64_t total = 0;
  for (int64_t c : s.vars_by_role) total += c;
  CHECK(total == s.vars);
  CHECK(var_role_name(var_role::levelization) == std::string("levelization"));
}

TEST_CASE("export_dimacs emits a solvable formula with a role map") {
  cnf_builder b;
  auto xs = fresh(b, 3, var_role::connection);
  b.exactly_one(xs, var_role::connection);
  b.add_clause({~xs[0]});
  b.new_lit(var_role::fault, "inject g3");

  std::ostringstream out;
  b.export_dimacs(out, true);
  std::string text = out.str();
  CHECK(text.find("role 1 connection") != std::string::npos);
  CHECK(text.find("fault inject g3") != std::string::npos);

  std::istringstream in(text);
  sat::dimacs_problem p = sat::parse_dimacs(in);
  CHECK(p.n_vars == b.num_vars());
  sat::solver s;
  for (int i = 0; i < p.n_vars; ++i) s.new_var();
  for (const auto& c : p.clauses) s.add_clause(c);
  REQUIRE(s.solve() == solve_status::sat);
  int chosen = 0;
  for (lit x : xs) chosen += s.model_value(sat::lit_var(x)) ? 1 : 0;
  CHECK(chosen == 1);
  CHECK(!s.model_value(sat::lit_var(xs[0])));
}

TEST_CASE("solve honors limits and stays incremental") {
  cnf_builder b;
  auto xs = fresh(b, 4);
  b.at_most_one(xs, var_role::io);
  CHECK(b.solve({xs[0]}) == solve_status::sat);
  CHECK(b.model(xs[0]));
  CHECK(!b.model(xs[1]));
  CHECK(b.solve({xs[0], xs[1]}) == solve_status::unsat);
  CHECK(b.solve({xs[1]}) == solve_status::sat);
  b.add_clause({~xs[1]});
  CHECK(b.solve({xs[1]}) == solve_status::unsat);

  sat::solve_limits limits;
  limits.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK(b.solve({}, limits) == solve_status::unknown);
  CHECK(b.solve() == solve_status::sat);
}

TEST_CASE("clause count matches exported formula") {
  cnf_builder b;
  auto xs = fresh(b, 3);
  b.add_clause({xs[0], xs[1]});
  b.add_clause({~xs[2]});
  std::ostringstream out;
  b.export_dimacs(out, false);
  std::istringstream in(out.str());
  sat::dimacs_problem p = sat::parse_dimacs(in);
  CHECK(static_cast<int64_t>(p.clauses.size()) == b.stats().clauses);
}
