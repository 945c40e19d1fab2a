// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "netlift/encoder.hpp"
#include "netlift/oracle.hpp"

namespace netlift {

// Fault-free full-probe traces: one complete node valuation per input vector.
struct probe_trace_set {
  int n_inputs = 0;
  int n_gates = 0;
  std::vector<valuation> rows;
};

probe_trace_set collect_traces(const netlist& truth,
                               const std::vector<std::vector<bool>>& vectors);

// Unordered driver tuples (sorted, repetition allowed) of size `arity` over
// `candidates` that could deterministically produce `target`'s trace: rows
// agreeing on the tuple's values never disagree on the target's value.
std::vector<std::vector<node_ref>> feasible_tuples(const probe_trace_set& traces, int arity,
                                                   const std::vector<node_ref>& candidates,
                                                   node_ref target);

struct feasible_set {
  // per gate: list of feasible driver tuples
  std::vector<std::vector<std::vector<node_ref>>> by_gate;
};

// Feasible tuples for every gate of a model shaped by `arities`, with
// candidates = all primary inputs plus all other gates.
feasible_set feasible_sets(const probe_trace_set& traces, const std::vector<int>& arities);

// Forbids selecting any infeasible driver multiset on the pins of each gate
// of `copy`; returns the number of excluded tuples.
int emit_blocking(const feasible_set& fs, encoder& enc, cnf_builder& b, int copy);

// All 2^n vectors when n_inputs <= exhaustive_limit, else `random_count`
// vectors drawn with the given seed.
std::vector<std::vector<bool>> default_filter_vectors(int n_inputs, int exhaustive_limit = 12,
                                                      size_t random_count = 256,
                                                      uint64_t seed = 1);

std::string feasible_to_json(const feasible_set& fs, const netlist& names);

}  // namespace netlift
