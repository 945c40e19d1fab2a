// SPDX-License-Identifier: Apache-2.0
#include "netlift/cnf.hpp"

#include <cstdlib>
#include <ostream>
#include <stdexcept>

#include "netlift/sat/dimacs.hpp"
#include "netlift/sat/subprocess.hpp"

namespace netlift {

const char* var_role_name(var_role r) {
  switch (r) {
    case var_role::function: return "function";
    case var_role::connection: return "connection";
    case var_role::levelization: return "levelization";
    case var_role::fault: return "fault";
    case var_role::io: return "io";
  }
  return "?";
}

cnf_builder::cnf_builder(backend_kind kind, std::string external_command)
    : kind_(kind), command_(std::move(external_command)) {
  if (kind_ == backend_kind::subprocess && command_.empty()) {
    const char* env = std::getenv(external_solver_env);
    if (!env || !*env)
      throw std::runtime_error(std::string("subprocess backend needs a solver command (set ") +
                               external_solver_env + ")");
    command_ = env;
  }
  solver_ = std::make_unique<sat::solver>();
}

cnf_builder::~cnf_builder() = default;

sat::lit cnf_builder::new_lit(var_role role, std::string note) {
  sat::var v = solver_->new_var();
  roles_.push_back(role);
  ++stats_.vars;
  ++stats_.vars_by_role[static_cast<int>(role)];
  if (!note.empty()) notes_.emplace_back(v, std::move(note));
  return sat::make_lit(v);
}

void cnf_builder::add_clause(std::vector<sat::lit> c) {
  ++stats_.clauses;
  solver_->add_clause(c);
  clauses_.push_back(std::move(c));
}

void cnf_builder::add_clause(std::initializer_list<sat::lit> c) {
  add_clause(std::vector<sat::lit>(c));
}

sat::lit cnf_builder::ctrue() {
  if (ctrue_ == sat::lit_undef) {
    ctrue_ = new_lit(var_role::io, "const_true");
    add_clause({ctrue_});
  }
  return ctrue_;
}

sat::lit cnf_builder::mk_or(const std::vector<sat::lit>& xs, var_role role, std::string note) {
  sat::lit y = new_lit(role, std::move(note));
  std::vector<sat::lit> big{~y};
  for (sat::lit x : xs) {
    add_clause({~x, y});
    big.push_back(x);
  }
  add_clause(std::move(big));
  return y;
}

sat::lit cnf_builder::mk_and(const std::vector<sat::lit>& xs, var_role role, std::string note) {
  sat::lit y = new_lit(role, std::move(note));
  std::vector<sat::lit> big{y};
  for (sat::lit x : xs) {
    add_clause({~y, x});
    big.push_back(~x);
  }
  add_clause(std::move(big));
  return y;
}

void cnf_builder::at_most_one(const std::vector<sat::lit>& xs, var_role aux_role) {
  if (xs.size() <= 1) return;
  if (xs.size() <= 30) {
    for (size_t i = 0; i < xs.size(); ++i)
      for (size_t j = i + 1; j < xs.size(); ++j) add_clause({~xs[i], ~xs[j]});
    return;
  }
  at_most_k(xs, 1, aux_role);
}

void cnf_builder::exactly_one(const std::vector<sat::lit>& xs, var_role aux_role) {
  if (xs.empty()) throw std::runtime_error("exactly_one over empty candidate set");
  add_clause(std::vector<sat::lit>(xs));
  at_most_one(xs, aux_role);
}

void cnf_builder::at_most_k(const std::vector<sat::lit>& xs, int k, var_role aux_role) {
  int n = static_cast<int>(xs.size());
  if (k < 0) throw std::runtime_error("negative cardinality bound");
  if (k == 0) {
    for (sat::lit x : xs) add_clause({~x});
    return;
  }
  if (n <= k) return;
  // Sequential-counter: s[i][j] true when at least j+1 of xs[0..i] are true.
  std::vector<std::vector<sat::lit>> s(n, std::vector<sat::lit>(k));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) s[i][j] = new_lit(aux_role);
  add_clause({~xs[0], s[0][0]});
  for (int j = 1; j < k; ++j) add_clause({~s[0][j]});
  for (int i = 1; i < n; ++i) {
    add_clause({~xs[i], s[i][0]});
    for (int j = 0; j < k; ++j) {
      add_clause({~s[i - 1][j], s[i][j]});
      if (j > 0) add_clause({~xs[i], ~s[i - 1][j - 1], s[i][j]});
    }
    add_clause({~xs[i], ~s[i - 1][k - 1]});
  }
}

sat::solve_status cnf_builder::solve(const std::vector<sat::lit>& assumptions,
                                     sat::solve_limits limits) {
  if (kind_ == backend_kind::embedded) {
    last_status_ = solver_->solve(assumptions, limits);
    return last_status_;
  }
  sat::dimacs_result r =
      sat::solve_via_command(command_, num_vars(), clauses_, assumptions, limits);
  sub_model_ = std::move(r.model);
  last_status_ = r.status;
  return last_status_;
}

bool cnf_builder::model(sat::lit l) const {
  if (last_status_ != sat::solve_status::sat)
    throw std::runtime_error("model requested without a satisfying assignment");
  if (kind_ == backend_kind::embedded) return solver_->model_value(l);
  return sub_model_.at(sat::lit_var(l)) ^ sat::lit_sign(l);
}

void cnf_builder::set_seed(uint64_t seed) {
  seed_ = seed;
  solver_->set_seed(seed);  // affects variables created from now on
}

const sat::solver_stats& cnf_builder::solver_statistics() const { return solver_->stats(); }

void cnf_builder::export_dimacs(std::ostream& out, bool with_role_map) const {
  std::vector<std::string> comments;
  if (with_role_map) {
    comments.reserve(roles_.size());
    std::vector<std::string> note_by_var(roles_.size());
    for (const auto& [v, note] : notes_) note_by_var[v] = note;
    for (size_t v = 0; v < roles_.size(); ++v) {
      std::string c = "role " + std::to_string(v + 1) + ' ' + var_role_name(roles_[v]);
      if (!note_by_var[v].empty()) c += ' ' + note_by_var[v];
      comments.push_back(std::move(c));
    }
  }
  sat::write_dimacs(out, num_vars(), clauses_, comments);
}

}  // namespace netlift
