// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "netlift/netlist.hpp"

namespace netlift {

// Single stuck-at fault on a gate output (primary inputs cannot be faulted).
struct fault_spec {
  node_ref target;
  bool value = false;  // false: stuck-at-0, true: stuck-at-1

  friend bool operator==(const fault_spec&, const fault_spec&) = default;
};

// One oracle experiment: an input vector, at most one fault, and a set of
// gate outputs to probe.
struct query {
  std::vector<bool> vector;
  std::optional<fault_spec> fault;
  std::vector<node_ref> probes;  // kept sorted and duplicate-free

  friend bool operator==(const query&, const query&) = default;
};

struct observation_record {
  query q;
  std::vector<bool> outputs;
  std::map<node_ref, bool> probed;  // keys equal q.probes

  friend bool operator==(const observation_record&, const observation_record&) = default;
};

// Full circuit valuation: primary inputs plus every gate output.
struct valuation {
  std::vector<bool> pi;
  std::vector<bool> gate_out;

  bool value(node_ref r) const {
    return r.kind == node_kind::primary_input ? pi.at(r.index) : gate_out.at(r.index);
  }
};

// Fault-free evaluation of every node in topological order.
valuation simulate(const netlist& n, const std::vector<bool>& vector);

// Evaluation with the query's fault substituted at its target before fanout
// propagation; outputs and probes read the post-fault values.
observation_record observe(const netlist& n, const query& q);

// True iff observe(n, r.q) reproduces outputs and probed values of every
// record in the log.
bool replay_consistent(const netlist& n, const std::vector<observation_record>& log);

// All gate outputs of n, for probe-everything queries.
std::vector<node_ref> all_gate_outputs(const netlist& n);

// Canonicalizes probes (sort, dedupe) and checks the query against n:
// vector length, probe/fault targets are gate outputs in range.
query make_query(const netlist& n, std::vector<bool> vector,
                 std::optional<fault_spec> fault = std::nullopt,
                 std::vector<node_ref> probes = {});

// The vector {bit i of m for each input i}; handy for exhaustive sweeps.
std::vector<bool> vector_from_index(int n_inputs, unsigned long long m);

}  // namespace netlift
