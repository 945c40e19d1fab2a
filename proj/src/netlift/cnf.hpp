// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "netlift/sat/solver.hpp"

namespace netlift {

// Variable roles for the encoding-statistics breakdown. Every variable gets
// exactly one role; auxiliary variables take the role of what they encode.
enum class var_role : uint8_t { function = 0, connection, levelization, fault, io };
inline constexpr int n_var_roles = 5;
const char* var_role_name(var_role r);

struct cnf_stats {
  int64_t vars = 0;
  int64_t clauses = 0;
  std::array<int64_t, n_var_roles> vars_by_role{};
};

enum class backend_kind { embedded, subprocess };

// Environment variable consulted for the external DIMACS solver command.
inline constexpr const char* external_solver_env = "NETLIFT_DIMACS_SOLVER";

// Clause store shared by the embedded incremental solver and the
// DIMACS-subprocess fallback. Both backends see identical clauses and must
// return identical verdicts; the embedded backend solves incrementally while
// the fallback re-dumps the formula per call.
class cnf_builder {
 public:
  explicit cnf_builder(backend_kind kind = backend_kind::embedded,
                       std::string external_command = "");
  ~cnf_builder();
  cnf_builder(const cnf_builder&) = delete;
  cnf_builder& operator=(const cnf_builder&) = delete;

  sat::lit new_lit(var_role role, std::string note = "");
  void add_clause(std::vector<sat::lit> c);
  void add_clause(std::initializer_list<sat::lit> c);

  // Literal fixed true (resp. false) by a top-level unit clause.
  sat::lit ctrue();
  sat::lit cfalse() { return ~ctrue(); }
  sat::lit constant(bool b) { return b ? ctrue() : cfalse(); }

  // y such that y <-> OR(xs) (resp. AND).
  sat::lit mk_or(const std::vector<sat::lit>& xs, var_role role, std::string note = "");
  sat::lit mk_and(const std::vector<sat::lit>& xs, var_role role, std::string note = "");

  void at_most_one(const std::vector<sat::lit>& xs, var_role aux_role);
  void exactly_one(const std::vector<sat::lit>& xs, var_role aux_role);
  void at_most_k(const std::vector<sat::lit>& xs, int k, var_role aux_role);

  sat::solve_status solve(const std::vector<sat::lit>& assumptions = {},
                          sat::solve_limits limits = {});
  bool model(sat::lit l) const;

  const cnf_stats& stats() const { return stats_; }
  int num_vars() const { return static_cast<int>(stats_.vars); }
  backend_kind backend() const { return kind_; }
  void set_seed(uint64_t seed);
  const sat::solver_stats& solver_statistics() const;

  // DIMACS with a `c role <var> <role> [note]` comment map when requested.
  void export_dimacs(std::ostream& out, bool with_role_map = true) const;

 private:
  backend_kind kind_;
  std::string command_;
  std::unique_ptr<sat::solver> solver_;
  std::vector<std::vector<sat::lit>> clauses_;
  std::vector<var_role> roles_;
  std::vector<std::pair<int, std::string>> notes_;
  cnf_stats stats_;
  sat::lit ctrue_ = sat::lit_undef;
  std::vector<bool> sub_model_;
  sat::solve_status last_status_ = sat::solve_status::unknown;
  uint64_t seed_ = 0;
};

}  // namespace netlift
