// SPDX-License-Identifier: Apache-2.0
#include "netlift/sat/solver.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>

namespace netlift::sat {

static_assert(sizeof(lit) == sizeof(uint32_t));

solver::solver() = default;
solver::~solver() = default;

float solver::cl_activity(cref c) const {
  return std::bit_cast<float>(arena_[c + 1 + cl_size(c)]);
}

void solver::cl_set_activity(cref c, float a) {
  arena_[c + 1 + cl_size(c)] = std::bit_cast<uint32_t>(a);
}

solver::cref solver::alloc_clause(const std::vector<lit>& lits, bool learnt) {
  cref c = static_cast<cref>(arena_.size());
  arena_.push_back(static_cast<uint32_t>(lits.size()) << 2 | (learnt ? 2u : 0u));
  for (lit l : lits) arena_.push_back(static_cast<uint32_t>(l.x));
  if (learnt) arena_.push_back(std::bit_cast<uint32_t>(0.0f));
  return c;
}

var solver::new_var() {
  var v = num_vars();
  assigns_.push_back(l_undef);
  vardata_.push_back({});
  saved_phase_.push_back(0);
  double jitter = 0.0;
  if (seed_) {
    uint64_t h = seed_ ^ (static_cast<uint64_t>(v) * 0x9e3779b97f4a7c15ull);
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    jitter = static_cast<double>(h % 1000003ull) * 1e-12;
  }
  activity_.push_back(jitter);
  heap_index_.push_back(-1);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

void solver::set_seed(uint64_t seed) { seed_ = seed; }

void solver::attach_clause(cref c) {
  assert(cl_size(c) >= 2);
  watches_[(~cl_lit(c, 0)).x].push_back({c, cl_lit(c, 1)});
  watches_[(~cl_lit(c, 1)).x].push_back({c, cl_lit(c, 0)});
}

void solver::detach_clause(cref c) {
  for (lit w : {cl_lit(c, 0), cl_lit(c, 1)}) {
    std::vector<watcher>& ws = watches_[(~w).x];
    for (size_t i = 0; i < ws.size(); ++i)
      if (ws[i].cr == c) {
        ws[i] = ws.back();
        ws.pop_back();
        break;
      }
  }
}

bool solver::locked(cref c) const {
  lit p = cl_lit(c, 0);
  return value(p) == l_true && reason(lit_var(p)) == c;
}

void solver::remove_clause(cref c) {
  detach_clause(c);
  wasted_ += cl_size(c) + (cl_learnt(c) ? 2 : 1);
  arena_[c] |= 1;  // relocated/dead flag
}

bool solver::add_clause(std::vector<lit> c) {
  assert(decision_level() == 0);
  if (!ok_) return false;
  std::sort(c.begin(), c.end());
  std::vector<lit> out;
  lit prev = lit_undef;
  for (lit l : c) {
    assert(lit_var(l) >= 0 && lit_var(l) < num_vars());
    if (value(l) == l_true || l == ~prev) return true;  // satisfied or tautology
    if (value(l) != l_false && l != prev) {
      out.push_back(l);
      prev = l;
    }
  }
  if (out.empty()) return ok_ = false;
  if (out.size() == 1) {
    unchecked_enqueue(out[0]);
    ++n_problem_clauses_;
    return ok_ = (propagate() == cref_undef);
  }
  cref cr = alloc_clause(out, false);
  clauses_.push_back(cr);
  attach_clause(cr);
  ++n_problem_clauses_;
  return true;
}

void solver::unchecked_enqueue(lit p, cref from) {
  assert(value(p) == l_undef);
  assigns_[lit_var(p)] = lit_sign(p) ? l_false : l_true;
  vardata_[lit_var(p)] = {from, decision_level()};
  trail_.push_back(p);
}

solver::cref solver::propagate() {
  cref confl = cref_undef;
  while (qhead_ < trail_.size()) {
    lit p = trail_[qhead_++];
    ++stats_.propagations;
    std::vector<watcher>& ws = watches_[p.x];
    size_t i = 0, j = 0;
    while (i < ws.size()) {
      watcher w = ws[i];
      if (value(w.blocker) == l_true) {
        ws[j++] = ws[i++];
        continue;
      }
      cref cr = w.cr;
      lit false_lit = ~p;
      if (cl_lit(cr, 0) == false_lit) {
        cl_lit(cr, 0) = cl_lit(cr, 1);
        cl_lit(cr, 1) = false_lit;
      }
      ++i;
      lit first = cl_lit(cr, 0);
      if (first != w.blocker && value(first) == l_true) {
        ws[j++] = {cr, first};
        continue;
      }
      uint32_t sz = cl_size(cr);
      bool moved = false;
      for (uint32_t k = 2; k < sz; ++k)
        if (value(cl_lit(cr, k)) != l_false) {
          cl_lit(cr, 1) = cl_lit(cr, k);
          cl_lit(cr, k) = false_lit;
          watches_[(~cl_lit(cr, 1)).x].push_back({cr, first});
          moved = true;
          break;
        }
      if (moved) continue;
      ws[j++] = {cr, first};
      if (value(first) == l_false) {
        confl = cr;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        unchecked_enqueue(first, cr);
      }
    }
    ws.resize(j);
  }
  return confl;
}

void solver::cancel_until(int lvl) {
  if (decision_level() <= lvl) return;
  for (int c = static_cast<int>(trail_.size()) - 1; c >= trail_lim_[lvl]; --c) {
    var x = lit_var(trail_[c]);
    assigns_[x] = l_undef;
    saved_phase_[x] = !lit_sign(trail_[c]);
    if (heap_index_[x] < 0) heap_insert(x);
  }
  qhead_ = static_cast<size_t>(trail_lim_[lvl]);
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
}

void solver::analyze(cref confl, std::vector<lit>& out_learnt, int& out_btlevel) {
  int path_c = 0;
  lit p = lit_undef;
  out_learnt.push_back(lit_undef);  // slot for the asserting literal
  int index = static_cast<int>(trail_.size()) - 1;

  do {
    assert(confl != cref_undef);
    if (cl_learnt(confl)) cla_bump(confl);
    for (uint32_t j = (p == lit_undef ? 0 : 1); j < cl_size(confl); ++j) {
      lit q = cl_lit(confl, j);
      var vq = lit_var(q);
      if (!seen_[vq] && level(vq) > 0) {
        var_bump(vq);
        seen_[vq] = 1;
        if (level(vq) >= decision_level())
          ++path_c;
        else
          out_learnt.push_back(q);
      }
    }
    while (!seen_[lit_var(trail_[index--])]) {
    }
    p = trail_[index + 1];
    confl = reason(lit_var(p));
    seen_[lit_var(p)] = 0;
    --path_c;
  } while (path_c > 0);
  out_learnt[0] = ~p;

  analyze_toclear_ = out_learnt;
  uint32_t abstract_levels = 0;
  for (size_t i = 1; i < out_learnt.size(); ++i)
    abstract_levels |= 1u << (level(lit_var(out_learnt[i])) & 31);
  size_t j = 1;
  for (size_t i = 1; i < out_learnt.size(); ++i)
    if (reason(lit_var(out_learnt[i])) == cref_undef ||
        !lit_redundant(out_learnt[i], abstract_levels))
      out_learnt[j++] = out_learnt[i];
  out_learnt.resize(j);
  stats_.learnts_literals += out_learnt.size();

  if (out_learnt.size() == 1) {
    out_btlevel = 0;
  } else {
    size_t max_i = 1;
    for (size_t i = 2; i < out_learnt.size(); ++i)
      if (level(lit_var(out_learnt[i])) > level(lit_var(out_learnt[max_i]))) max_i = i;
    std::swap(out_learnt[1], out_learnt[max_i]);
    out_btlevel = level(lit_var(out_learnt[1]));
  }

  for (lit l : analyze_toclear_) seen_[lit_var(l)] = 0;
}

bool solver::lit_redundant(lit p, uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  size_t top = analyze_toclear_.size();
  while (!analyze_stack_.empty()) {
    lit q = analyze_stack_.back();
    analyze_stack_.pop_back();
    cref cr = reason(lit_var(q));
    assert(cr != cref_undef);
    for (uint32_t i = 1; i < cl_size(cr); ++i) {
      lit a = cl_lit(cr, i);
      var va = lit_var(a);
      if (!seen_[va] && level(va) > 0) {
        if (reason(va) != cref_undef && (1u << (level(va) & 31)) & abstract_levels) {
          seen_[va] = 1;
          analyze_stack_.push_back(a);
          analyze_toclear_.push_back(a);
        } else {
          for (size_t k = top; k < analyze_toclear_.size(); ++k)
            seen_[lit_var(analyze_toclear_[k])] = 0;
          analyze_toclear_.resize(top);
          return false;
        }
      }
    }
  }
  return true;
}

void solver::var_bump(var v) {
  activity_[v] += act_inc_;
  if (activity_[v] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    act_inc_ *= 1e-100;
  }
  if (heap_index_[v] >= 0) heap_percolate_up(heap_index_[v]);
}

void solver::cla_bump(cref c) {
  float a = cl_activity(c) + static_cast<float>(cla_inc_);
  cl_set_activity(c, a);
  if (a > 1e20f) {
    for (cref lc : learnts_) cl_set_activity(lc, cl_activity(lc) * 1e-20f);
    cla_inc_ *= 1e-20;
  }
}

void solver::heap_insert(var v) {
  heap_index_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_percolate_up(heap_index_[v]);
}

void solver::heap_percolate_up(int i) {
  var v = heap_[i];
  while (i > 0) {
    int parent = (i - 1) >> 1;
    var pv = heap_[parent];
    if (activity_[pv] > activity_[v] || (activity_[pv] == activity_[v] && pv < v)) break;
    heap_[i] = pv;
    heap_index_[pv] = i;
    i = parent;
  }
  heap_[i] = v;
  heap_index_[v] = i;
}

void solver::heap_percolate_down(int i) {
  var v = heap_[i];
  int n = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * i + 1;
    if (child >= n) break;
    int right = child + 1;
    if (right < n) {
      var cv = heap_[child], rv = heap_[right];
      if (activity_[rv] > activity_[cv] || (activity_[rv] == activity_[cv] && rv < cv))
        child = right;
    }
    var cv = heap_[child];
    if (activity_[cv] > activity_[v] || (activity_[cv] == activity_[v] && cv < v)) {
      heap_[i] = cv;
      heap_index_[cv] = i;
      i = child;
    } else {
      break;
    }
  }
  heap_[i] = v;
  heap_index_[v] = i;
}

var solver::heap_pop() {
  var v = heap_[0];
  heap_index_[v] = -1;
  heap_[0] = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_index_[heap_[0]] = 0;
    heap_percolate_down(0);
  }
  return v;
}

lit solver::pick_branch_lit() {
  while (!heap_.empty()) {
    var v = heap_pop();
    if (assigns_[v] == l_undef) return make_lit(v, !saved_phase_[v]);
  }
  return lit_undef;
}

void solver::reduce_db() {
  double extra_lim = cla_inc_ / std::max<size_t>(learnts_.size(), 1);
  std::sort(learnts_.begin(), learnts_.end(), [this](cref x, cref y) {
    bool bx = cl_size(x) == 2, by = cl_size(y) == 2;
    if (bx != by) return by;  // binaries last (kept)
    float ax = cl_activity(x), ay = cl_activity(y);
    if (ax != ay) return ax < ay;
    return x < y;
  });
  size_t j = 0;
  for (size_t i = 0; i < learnts_.size(); ++i) {
    cref c = learnts_[i];
    if (cl_size(c) > 2 && !locked(c) &&
        (i < learnts_.size() / 2 || cl_activity(c) < extra_lim))
      remove_clause(c);
    else
      learnts_[j++] = c;
  }
  learnts_.resize(j);
  if (wasted_ > arena_.size() / 5) garbage_collect();
}

solver::cref solver::relocate(cref c, std::vector<uint32_t>& to) {
  if (arena_[c] & 1) return arena_[c + 1];  // already moved
  cref nc = static_cast<cref>(to.size());
  uint32_t words = 1 + cl_size(c) + (cl_learnt(c) ? 1 : 0);
  for (uint32_t k = 0; k < words; ++k) to.push_back(arena_[c + k]);
  arena_[c] |= 1;
  arena_[c + 1] = nc;
  return nc;
}

void solver::garbage_collect() {
  std::vector<uint32_t> to;
  to.reserve(arena_.size() - wasted_);
  for (cref& c : clauses_) c = relocate(c, to);
  for (cref& c : learnts_) c = relocate(c, to);
  for (lit p : trail_) {
    var v = lit_var(p);
    if (vardata_[v].reason != cref_undef) vardata_[v].reason = relocate(vardata_[v].reason, to);
  }
  arena_ = std::move(to);
  wasted_ = 0;
  for (std::vector<watcher>& ws : watches_) ws.clear();
  for (cref c : clauses_) attach_clause(c);
  for (cref c : learnts_) attach_clause(c);
}

namespace {

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

solve_status solver::solve(const std::vector<lit>& assumptions, solve_limits limits) {
  assert(decision_level() == 0);
  model_.clear();
  if (!ok_) return solve_status::unsat;
  if (propagate() != cref_undef) {
    ok_ = false;
    return solve_status::unsat;
  }

  max_learnts_ = std::max(static_cast<double>(n_problem_clauses_) / 3.0, 1000.0);
  double adjust_confl = 100;
  int adjust_cnt = 100;
  uint64_t conflict_budget =
      limits.max_conflicts == std::numeric_limits<uint64_t>::max()
          ? std::numeric_limits<uint64_t>::max()
          : stats_.conflicts + limits.max_conflicts;

  solve_status result = solve_status::unknown;
  int curr_restarts = 0;
  std::vector<lit> learnt;

  while (result == solve_status::unknown) {
    uint64_t budget_this_restart =
        static_cast<uint64_t>(luby(2.0, curr_restarts) * 100.0);
    uint64_t conflict_c = 0;
    uint64_t steps = 0;
    ++curr_restarts;
    if (curr_restarts > 1) ++stats_.restarts;

    for (;;) {
      ++steps;
      cref confl = propagate();
      if (confl != cref_undef) {
        ++stats_.conflicts;
        ++conflict_c;
        if (decision_level() == 0) {
          ok_ = false;
          result = solve_status::unsat;
          break;
        }
        learnt.clear();
        int btlevel = 0;
        analyze(confl, learnt, btlevel);
        cancel_until(btlevel);
        if (learnt.size() == 1) {
          unchecked_enqueue(learnt[0]);
        } else {
          cref cr = alloc_clause(learnt, true);
          learnts_.push_back(cr);
          attach_clause(cr);
          cla_bump(cr);
          unchecked_enqueue(learnt[0], cr);
        }
        var_decay();
        cla_decay();
        if (--adjust_cnt == 0) {
          adjust_confl *= 1.5;
          adjust_cnt = static_cast<int>(adjust_confl);
          max_learnts_ *= 1.1;
        }
      } else {
        if (stats_.conflicts >= conflict_budget ||
            ((steps & 2047) == 1 && std::chrono::steady_clock::now() >= limits.deadline)) {
          result = solve_status::unknown;
          cancel_until(0);
          return result;
        }
        if (conflict_c >= budget_this_restart) {
          cancel_until(0);
          break;  // restart
        }
        if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >=
            max_learnts_)
          reduce_db();

        lit next = lit_undef;
        while (decision_level() < static_cast<int>(assumptions.size())) {
          lit p = assumptions[decision_level()];
          if (value(p) == l_true) {
            new_decision_level();
          } else if (value(p) == l_false) {
            result = solve_status::unsat;
            break;
          } else {
            next = p;
            break;
          }
        }
        if (result != solve_status::unknown) break;
        if (next == lit_undef && decision_level() >= static_cast<int>(assumptions.size())) {
          next = pick_branch_lit();
          if (next == lit_undef) {
            model_.resize(num_vars());
            for (var v = 0; v < num_vars(); ++v) model_[v] = (assigns_[v] == l_true);
            result = solve_status::sat;
            break;
          }
          ++stats_.decisions;
        }
        new_decision_level();
        unchecked_enqueue(next);
      }
    }
  }
  cancel_until(0);
  return result;
}

}  // namespace netlift::sat
