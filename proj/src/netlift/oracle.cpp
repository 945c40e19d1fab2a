// SPDX-License-Identifier: Apache-2.0
#include "netlift/oracle.hpp"

#include <algorithm>

namespace netlift {

namespace {

valuation evaluate(const netlist& n, const std::vector<bool>& vec,
                   const std::optional<fault_spec>& fault) {
  if (static_cast<int>(vec.size()) != n.n_inputs)
    throw validation_error("input vector length mismatch");
  valuation v;
  v.pi = vec;
  v.gate_out.resize(n.n_gates());
  for (int gid : topological_order(n)) {
    const gate& g = n.gates[gid];
    unsigned row = 0;
    for (int j = 0; j < g.arity(); ++j)
      if (v.value(g.pins[j])) row |= 1u << j;
    bool out = g.function.row(row);
    if (fault && fault->target == gate_ref(gid)) out = fault->value;
    v.gate_out[gid] = out;
  }
  return v;
}

}  // namespace

valuation simulate(const netlist& n, const std::vector<bool>& vector) {
  return evaluate(n, vector, std::nullopt);
}

observation_record observe(const netlist& n, const query& q) {
  if (q.fault) {
    if (q.fault->target.kind != node_kind::gate_output || !n.valid_ref(q.fault->target))
      throw validation_error("fault target must be a gate output of the circuit");
  }
  for (node_ref p : q.probes)
    if (p.kind != node_kind::gate_output || !n.valid_ref(p))
      throw validation_error("probe target must be a gate output of the circuit");

  valuation v = evaluate(n, q.vector, q.fault);
  observation_record rec;
  rec.q = q;
  rec.outputs.reserve(n.outputs.size());
  for (node_ref o : n.outputs) rec.outputs.push_back(v.value(o));
  for (node_ref p : q.probes) rec.probed[p] = v.value(p);
  return rec;
}

bool replay_consistent(const netlist& n, const std::vector<observation_record>& log) {
  for (const observation_record& r : log) {
    observation_record got = observe(n, r.q);
    if (got.outputs != r.outputs || got.probed != r.probed) return false;
  }
  return true;
}

std::vector<node_ref> all_gate_outputs(const netlist& n) {
  std::vector<node_ref> out;
  out.reserve(n.n_gates());
  for (int i = 0; i < n.n_gates(); ++i) out.push_back(gate_ref(i));
  return out;
}

query make_query(const netlist& n, std::vector<bool> vector, std::optional<fault_spec> fault,
                 std::vector<node_ref> probes) {
  if (static_cast<int>(vector.size()) != n.n_inputs)
    throw validation_error("input vector length mismatch");
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  query q{std::move(vector), fault, std::move(probes)};
  if (q.fault && (q.fault->target.kind != node_kind::gate_output || !n.valid_ref(q.fault->target)))
    throw validation_error("fault target must be a gate output of the circuit");
  for (node_ref p : q.probes)
    if (p.kind != node_kind::gate_output || !n.valid_ref(p))
      throw validation_error("probe target must be a gate output of the circuit");
  return q;
}

std::vector<bool> vector_from_index(int n_inputs, unsigned long long m) {
  std::vector<bool> v(n_inputs);
  for (int i = 0; i < n_inputs; ++i) v[i] = (m >> i) & 1ull;
  return v;
}

}  // namespace netlift
