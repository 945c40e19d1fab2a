// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace netlift::sat {

using var = int;

// Literal encoded as 2*var + sign; sign 1 means negated.
struct lit {
  int x = -2;

  friend bool operator==(lit, lit) = default;
  friend bool operator<(lit a, lit b) { return a.x < b.x; }
};

constexpr lit make_lit(var v, bool neg = false) { return lit{v + v + (neg ? 1 : 0)}; }
constexpr lit operator~(lit l) { return lit{l.x ^ 1}; }
constexpr var lit_var(lit l) { return l.x >> 1; }
constexpr bool lit_sign(lit l) { return l.x & 1; }
constexpr lit lit_undef{-2};

enum class solve_status { sat, unsat, unknown };

struct solver_stats {
  uint64_t conflicts = 0;
  uint64_t decisions = 0;
  uint64_t propagations = 0;
  uint64_t restarts = 0;
  uint64_t learnts_literals = 0;
};

// Budget for one solve call; unlimited by default.
struct solve_limits {
  uint64_t max_conflicts = std::numeric_limits<uint64_t>::max();
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
};

// Incremental CDCL solver: two-watched-literal propagation, activity-driven
// decisions with phase saving, first-UIP learning with recursive clause
// minimization, Luby restarts, and activity-based learnt-clause reduction.
// Clauses persist across solve calls; per-call assumptions supported.
class solver {
 public:
  solver();
  ~solver();
  solver(const solver&) = delete;
  solver& operator=(const solver&) = delete;

  var new_var();
  int num_vars() const { return static_cast<int>(assigns_.size()); }

  // Returns false once the formula is known unsatisfiable at the top level.
  bool add_clause(std::vector<lit> c);
  bool okay() const { return ok_; }

  solve_status solve(const std::vector<lit>& assumptions = {}, solve_limits limits = {});

  // Valid after solve returned sat.
  bool model_value(var v) const { return model_.at(v); }
  bool model_value(lit l) const { return model_.at(lit_var(l)) ^ lit_sign(l); }

  // Perturbs initial variable activities deterministically.
  void set_seed(uint64_t seed);

  const solver_stats& stats() const { return stats_; }
  uint64_t num_clauses() const { return n_problem_clauses_; }
  uint64_t num_learnts() const { return learnts_.size(); }

 private:
  using cref = uint32_t;
  static constexpr cref cref_undef = 0xffffffffu;
  static constexpr uint8_t l_true = 0, l_false = 1, l_undef = 2;

  struct watcher {
    cref cr;
    lit blocker;
  };
  struct var_data {
    cref reason = cref_undef;
    int level = 0;
  };

  // Arena clause layout: header word, then the literals. Header packs
  // size (bits 2..31), learnt flag (bit 1), relocated flag (bit 0).
  // Learnt clauses carry one trailing word holding their activity as floats.
  std::vector<uint32_t> arena_;
  uint32_t wasted_ = 0;

  uint32_t cl_size(cref c) const { return arena_[c] >> 2; }
  bool cl_learnt(cref c) const { return arena_[c] & 2; }
  lit& cl_lit(cref c, uint32_t i) { return *reinterpret_cast<lit*>(&arena_[c + 1 + i]); }
  lit cl_lit(cref c, uint32_t i) const { return lit{static_cast<int>(arena_[c + 1 + i])}; }
  float cl_activity(cref c) const;
  void cl_set_activity(cref c, float a);
  cref alloc_clause(const std::vector<lit>& lits, bool learnt);

  std::vector<std::vector<watcher>> watches_;  // indexed by lit.x
  std::vector<cref> clauses_;
  std::vector<cref> learnts_;
  uint64_t n_problem_clauses_ = 0;

  std::vector<uint8_t> assigns_;  // per var: l_true/l_false/l_undef
  std::vector<var_data> vardata_;
  std::vector<uint8_t> saved_phase_;
  std::vector<lit> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;
  bool ok_ = true;

  std::vector<double> activity_;
  double act_inc_ = 1.0;
  double cla_inc_ = 1.0;
  std::vector<int> heap_;
  std::vector<int> heap_index_;  // -1 if not in heap
  uint64_t seed_ = 0;

  std::vector<uint8_t> seen_;
  std::vector<lit> analyze_stack_;
  std::vector<lit> analyze_toclear_;

  std::vector<uint8_t> model_;
  solver_stats stats_;
  double max_learnts_ = 0;

  uint8_t value(var v) const { return assigns_[v]; }
  uint8_t value(lit l) const {
    uint8_t a = assigns_[lit_var(l)];
    return a == l_undef ? l_undef : a ^ static_cast<uint8_t>(lit_sign(l));
  }
  int level(var v) const { return vardata_[v].level; }
  cref reason(var v) const { return vardata_[v].reason; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void attach_clause(cref c);
  void detach_clause(cref c);
  void remove_clause(cref c);
  bool locked(cref c) const;

  void new_decision_level() { trail_lim_.push_back(static_cast<int>(trail_.size())); }
  void unchecked_enqueue(lit p, cref from = cref_undef);
  cref propagate();
  void cancel_until(int lvl);
  void analyze(cref confl, std::vector<lit>& out_learnt, int& out_btlevel);
  bool lit_redundant(lit p, uint32_t abstract_levels);
  lit pick_branch_lit();
  void reduce_db();
  void garbage_collect();
  cref relocate(cref c, std::vector<uint32_t>& to);

  void var_bump(var v);
  void var_decay() { act_inc_ *= (1.0 / 0.95); }
  void cla_bump(cref c);
  void cla_decay() { cla_inc_ *= (1.0 / 0.999); }
  void heap_insert(var v);
  void heap_percolate_up(int i);
  void heap_percolate_down(int i);
  var heap_pop();
};

}  // namespace netlift::sat
