// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>

#include "netlift/cnf.hpp"
#include "netlift/oracle.hpp"

namespace netlift {

// Shape of the unknown circuit: gate count and arities, I/O counts, and the
// modeling switches. Gate functions and all wiring are left to the solver.
struct model_params {
  int n_inputs = 0;
  int n_outputs = 0;
  std::vector<int> gate_arities;
  // Optional per-arity function whitelist; entries are full truth tables.
  std::optional<std::vector<truth_table>> allowed_functions;
  bool require_fanout = true;    // every gate output must drive a pin or an output
  bool anchor_po_level = false;  // force output drivers to level 1 (symmetry only)
  bool levelization = true;      // acyclicity constraints; off only for regressions

  int n_gates() const { return static_cast<int>(gate_arities.size()); }
  // Same I/O counts and arities as n, everything else unknown.
  static model_params shape_of(const netlist& n);
};

enum class probe_mode { off, all, budget };

// One circuit evaluation inside the CNF. `node` holds each gate's pre-fault
// output value; `node_fe` the value its readers see (same literal unless the
// evaluation carries fault machinery or a fixed fault).
struct instance_signals {
  std::vector<sat::lit> inputs;
  std::vector<sat::lit> inject_fault;  // per gate; empty without fault machinery
  sat::lit fault_val = sat::lit_undef;
  std::vector<sat::lit> node;
  std::vector<sat::lit> node_fe;
  std::vector<sat::lit> outputs;
};

// Query variables shared by the two miter copies plus the difference literal.
struct miter_signals {
  std::array<instance_signals, 2> copy;
  std::vector<sat::lit> probe_sel;  // per gate; only allocated in budget mode
  sat::lit diff = sat::lit_undef;   // assume diff to search for a discriminating query
  probe_mode probes = probe_mode::off;
  bool fault = false;
};

// CNF model of the fully camouflaged circuit: per-gate truth-table bits and
// per-pin/per-output driver selectors, with level variables enforcing that
// any satisfying wiring is acyclic. Supports one or two configuration copies
// (two for the discriminating-query miter).
class encoder {
 public:
  encoder(model_params params, cnf_builder& b, int copies = 2);

  // Configuration variables, selector exactly-one constraints, the function
  // whitelist, and the fanout requirement.
  void build_skeleton();
  // Level variables and ordering constraints; no-op when levelization is off.
  void add_levelization();

  // Fresh evaluation of copy `copy` with free query variables.
  instance_signals instantiate(int copy, bool fault_machinery);
  // Two-copy miter sharing one query; returns the difference literal setup.
  miter_signals build_miter(probe_mode pm, int probe_budget, bool fault_mode);
  // Constant-folded evaluation of a recorded query, with outputs and probed
  // values asserted. Returns the instantiation's per-gate pre-fault values.
  instance_signals add_observation(const observation_record& rec, int copy);

  // Reads the current model into a netlist (named after `name_template` when
  // given). The result is not validated; callers decide what a cycle means.
  netlist decode(int copy, const netlist* name_template = nullptr) const;
  // Forbids every configuration structurally equal to `first` (same wiring
  // and function per gate modulo pin permutation, same output drivers).
  void block_config(const netlist& first, int copy);
  // Pins copy's configuration variables to a concrete circuit.
  void fix_config(const netlist& truth, int copy);

  const model_params& params() const { return params_; }
  int copies() const { return copies_; }
  const std::vector<node_ref>& pin_candidates(int g) const { return pin_cands_[g]; }
  const std::vector<node_ref>& po_candidates() const { return po_cands_; }

  sat::lit function_bit(int copy, int g, unsigned row) const { return f_.at(copy).at(g).at(row); }
  sat::lit pin_sel(int copy, int g, int pin, node_ref cand) const;
  sat::lit po_sel(int copy, int o, node_ref cand) const;
  sat::lit level_bit(int copy, int g, int i) const { return lvl_.at(copy).at(g).at(i); }
  // min i with l_i true in the current model
  int decoded_level(int copy, int g) const;

 private:
  model_params params_;
  cnf_builder& b_;
  int copies_;
  bool skeleton_built_ = false;
  bool levelization_built_ = false;

  std::vector<std::vector<node_ref>> pin_cands_;  // per gate
  std::vector<node_ref> po_cands_;

  // per copy, per gate: 2^arity function bits
  std::vector<std::vector<std::vector<sat::lit>>> f_;
  // per copy, per gate, per pin: selector per candidate (pin_cands_ order)
  std::vector<std::vector<std::vector<std::vector<sat::lit>>>> sel_;
  // per copy, per output: selector per candidate (po_cands_ order)
  std::vector<std::vector<std::vector<sat::lit>>> posel_;
  // per copy, per gate: level bits 0..n_gates
  std::vector<std::vector<std::vector<sat::lit>>> lvl_;

  int cand_index(int g, node_ref cand) const;
  // pv = value of gate g's pin `pin` given candidate values; adds mux clauses
  sat::lit pin_value(int copy, int g, int pin, const std::vector<sat::lit>& cand_values,
                     var_role role);
  instance_signals instantiate_impl(int copy, bool fault_machinery, const query* fixed,
                                    const instance_signals* share_query);
  std::vector<sat::lit> candidate_values(int g_or_po_gate, const instance_signals& sig,
                                         const std::vector<node_ref>& cands) const;
};

}  // namespace netlift
