// SPDX-License-Identifier: Apache-2.0
#include "netlift/encoder.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace netlift {

model_params model_params::shape_of(const netlist& n) {
  model_params p;
  p.n_inputs = n.n_inputs;
  p.n_outputs = n.n_outputs();
  for (const gate& g : n.gates) p.gate_arities.push_back(g.arity());
  return p;
}

encoder::encoder(model_params params, cnf_builder& b, int copies)
    : params_(std::move(params)), b_(b), copies_(copies) {
  if (copies_ < 1 || copies_ > 2) throw std::runtime_error("encoder supports 1 or 2 copies");
  if (params_.n_inputs < 1 || params_.n_outputs < 1 || params_.n_gates() < 1)
    throw std::runtime_error("model needs at least one input, output and gate");
  for (int k : params_.gate_arities)
    if (k < 1 || k > 8) throw std::runtime_error("gate arity out of supported range");

  int G = params_.n_gates();
  pin_cands_.resize(G);
  for (int g = 0; g < G; ++g) {
    for (int i = 0; i < params_.n_inputs; ++i) pin_cands_[g].push_back(pi_ref(i));
    for (int h = 0; h < G; ++h)
      if (h != g) pin_cands_[g].push_back(gate_ref(h));
  }
  for (int i = 0; i < params_.n_inputs; ++i) po_cands_.push_back(pi_ref(i));
  for (int h = 0; h < G; ++h) po_cands_.push_back(gate_ref(h));
}

int encoder::cand_index(int g, node_ref cand) const {
  if (cand.kind == node_kind::primary_input) return cand.index;
  if (cand.index == g) throw std::runtime_error("gate cannot drive its own pin");
  return params_.n_inputs + cand.index - (cand.index > g ? 1 : 0);
}

sat::lit encoder::pin_sel(int copy, int g, int pin, node_ref cand) const {
  return sel_.at(copy).at(g).at(pin).at(cand_index(g, cand));
}

sat::lit encoder::po_sel(int copy, int o, node_ref cand) const {
  int idx = cand.kind == node_kind::primary_input ? cand.index : params_.n_inputs + cand.index;
  return posel_.at(copy).at(o).at(idx);
}

void encoder::build_skeleton() {
  if (skeleton_built_) throw std::runtime_error("skeleton already built");
  skeleton_built_ = true;
  int G = params_.n_gates();

  f_.resize(copies_);
  sel_.resize(copies_);
  posel_.resize(copies_);
  for (int c = 0; c < copies_; ++c) {
    f_[c].resize(G);
    sel_[c].resize(G);
    for (int g = 0; g < G; ++g) {
      int k = params_.gate_arities[g];
      for (unsigned m = 0; m < (1u << k); ++m)
        f_[c][g].push_back(b_.new_lit(var_role::function,
                                      "f c" + std::to_string(c) + " g" + std::to_string(g) +
                                          " row" + std::to_string(m)));
      sel_[c][g].resize(k);
      for (int j = 0; j < k; ++j) {
        for (node_ref cand : pin_cands_[g]) {
          (void)cand;
          sel_[c][g][j].push_back(b_.new_lit(var_role::connection));
        }
        b_.exactly_one(sel_[c][g][j], var_role::connection);
      }
    }
    posel_[c].resize(params_.n_outputs);
    for (int o = 0; o < params_.n_outputs; ++o) {
      for (node_ref cand : po_cands_) {
        (void)cand;
        posel_[c][o].push_back(b_.new_lit(var_role::connection));
      }
      b_.exactly_one(posel_[c][o], var_role::connection);
    }

    if (params_.allowed_functions) {
      for (int g = 0; g < G; ++g) {
        int k = params_.gate_arities[g];
        if (k > 5) throw std::runtime_error("function whitelist limited to arity <= 5");
        unsigned rows = 1u << k;
        std::vector<uint64_t> members;
        for (const truth_table& t : *params_.allowed_functions) {
          if (t.arity != k) continue;
          uint64_t pat = 0;
          for (unsigned m = 0; m < rows; ++m)
            if (t.bits[m]) pat |= 1ull << m;
          members.push_back(pat);
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (members.empty())
          throw std::runtime_error("function whitelist has no entry of arity " +
                                   std::to_string(k));
        uint64_t total = 1ull << rows;  // rows <= 32
        if (total - members.size() <= 64) {
          std::unordered_set<uint64_t> allowed(members.begin(), members.end());
          for (uint64_t pat = 0; pat < total; ++pat) {
            if (allowed.count(pat)) continue;
            std::vector<sat::lit> cl;
            for (unsigned m = 0; m < rows; ++m)
              cl.push_back(pat >> m & 1 ? ~f_[c][g][m] : f_[c][g][m]);
            b_.add_clause(std::move(cl));
          }
        } else {
          std::vector<sat::lit> inds;
          for (uint64_t pat : members) {
            sat::lit ind = b_.new_lit(var_role::function);
            for (unsigned m = 0; m < rows; ++m)
              b_.add_clause({~ind, pat >> m & 1 ? f_[c][g][m] : ~f_[c][g][m]});
            inds.push_back(ind);
          }
          b_.add_clause(std::move(inds));
        }
      }
    }

    if (params_.require_fanout) {
      for (int g = 0; g < G; ++g) {
        std::vector<sat::lit> readers;
        for (int h = 0; h < G; ++h) {
          if (h == g) continue;
          for (int j = 0; j < params_.gate_arities[h]; ++j)
            readers.push_back(sel_[c][h][j][cand_index(h, gate_ref(g))]);
        }
        for (int o = 0; o < params_.n_outputs; ++o)
          readers.push_back(posel_[c][o][params_.n_inputs + g]);
        b_.add_clause(std::move(readers));
      }
    }
  }
}

void encoder::add_levelization() {
  if (!skeleton_built_) throw std::runtime_error("skeleton not built");
  if (levelization_built_) throw std::runtime_error("levelization already built");
  if (!params_.levelization) return;
  levelization_built_ = true;
  int G = params_.n_gates();
  int L = G;  // any acyclic wiring of G gates levelizes within G levels

  lvl_.resize(copies_);
  for (int c = 0; c < copies_; ++c) {
    lvl_[c].resize(G);
    for (int g = 0; g < G; ++g) {
      for (int i = 0; i <= L; ++i)
        lvl_[c][g].push_back(b_.new_lit(var_role::levelization,
                                        "l c" + std::to_string(c) + " g" + std::to_string(g) +
                                            " i" + std::to_string(i)));
      b_.add_clause({~lvl_[c][g][0]});
      b_.add_clause({lvl_[c][g][L]});
      for (int i = 1; i <= L; ++i) b_.add_clause({lvl_[c][g][i], ~lvl_[c][g][i - 1]});
    }
    // R(k, j): some pin of gate j selects gate k's output.
    for (int j = 0; j < G; ++j) {
      for (int k = 0; k < G; ++k) {
        if (k == j) continue;
        std::vector<sat::lit> sels;
        for (int pin = 0; pin < params_.gate_arities[j]; ++pin)
          sels.push_back(sel_[c][j][pin][cand_index(j, gate_ref(k))]);
        sat::lit r = b_.mk_or(sels, var_role::levelization);
        // Reading a gate pushes the driver to a strictly higher level.
        for (int i = 1; i <= L; ++i)
          b_.add_clause({lvl_[c][j][i - 1], ~r, ~lvl_[c][k][i]});
      }
    }
    if (params_.anchor_po_level) {
      for (int o = 0; o < params_.n_outputs; ++o)
        for (int g = 0; g < G; ++g)
          b_.add_clause({~posel_[c][o][params_.n_inputs + g], lvl_[c][g][1]});
    }
  }
}

std::vector<sat::lit> encoder::candidate_values(int /*g_or_po_gate*/, const instance_signals& sig,
                                                const std::vector<node_ref>& cands) const {
  std::vector<sat::lit> vals;
  vals.reserve(cands.size());
  for (node_ref cand : cands)
    vals.push_back(cand.kind == node_kind::primary_input ? sig.inputs[cand.index]
                                                         : sig.node_fe[cand.index]);
  return vals;
}

sat::lit encoder::pin_value(int copy, int g, int pin, const std::vector<sat::lit>& cand_values,
                            var_role role) {
  sat::lit pv = b_.new_lit(role);
  const std::vector<sat::lit>& sels = sel_[copy][g][pin];
  for (size_t d = 0; d < cand_values.size(); ++d) {
    b_.add_clause({~sels[d], ~cand_values[d], pv});
    b_.add_clause({~sels[d], cand_values[d], ~pv});
  }
  return pv;
}

instance_signals encoder::instantiate_impl(int copy, bool fault_machinery, const query* fixed,
                                           const instance_signals* share_query) {
  if (!skeleton_built_) throw std::runtime_error("skeleton not built");
  if (copy < 0 || copy >= copies_) throw std::runtime_error("bad copy index");
  int G = params_.n_gates();
  instance_signals sig;

  if (fixed) {
    if (static_cast<int>(fixed->vector.size()) != params_.n_inputs)
      throw std::runtime_error("query vector length mismatch");
    for (bool bit : fixed->vector) sig.inputs.push_back(b_.constant(bit));
  } else if (share_query) {
    sig.inputs = share_query->inputs;
  } else {
    for (int i = 0; i < params_.n_inputs; ++i)
      sig.inputs.push_back(b_.new_lit(var_role::io, "x" + std::to_string(i)));
  }

  bool machinery = fault_machinery && !fixed;
  if (machinery) {
    if (share_query) {
      sig.inject_fault = share_query->inject_fault;
      sig.fault_val = share_query->fault_val;
    } else {
      for (int g = 0; g < G; ++g)
        sig.inject_fault.push_back(
            b_.new_lit(var_role::fault, "injectFault g" + std::to_string(g)));
      sig.fault_val = b_.new_lit(var_role::fault, "FaultVal");
      b_.at_most_one(sig.inject_fault, var_role::fault);
    }
  }

  for (int g = 0; g < G; ++g)
    sig.node.push_back(b_.new_lit(var_role::function, "n c" + std::to_string(copy) + " g" +
                                                          std::to_string(g)));

  if (fixed) {
    sig.node_fe = sig.node;
    if (fixed->fault) sig.node_fe[fixed->fault->target.index] = b_.constant(fixed->fault->value);
  } else if (machinery) {
    for (int g = 0; g < G; ++g) {
      sat::lit fe = b_.new_lit(var_role::fault, "fe c" + std::to_string(copy) + " g" +
                                                    std::to_string(g));
      sat::lit inj = sig.inject_fault[g];
      sat::lit fv = sig.fault_val;
      sat::lit n = sig.node[g];
      b_.add_clause({~inj, ~fv, fe});
      b_.add_clause({~inj, fv, ~fe});
      b_.add_clause({inj, ~n, fe});
      b_.add_clause({inj, n, ~fe});
      sig.node_fe.push_back(fe);
    }
  } else {
    sig.node_fe = sig.node;
  }

  for (int g = 0; g < G; ++g) {
    int k = params_.gate_arities[g];
    std::vector<sat::lit> cvals = candidate_values(g, sig, pin_cands_[g]);
    std::vector<sat::lit> pvs;
    for (int j = 0; j < k; ++j) pvs.push_back(pin_value(copy, g, j, cvals, var_role::connection));
    sat::lit n = sig.node[g];
    for (unsigned m = 0; m < (1u << k); ++m) {
      std::vector<sat::lit> base;
      for (int j = 0; j < k; ++j) base.push_back(m >> j & 1 ? ~pvs[j] : pvs[j]);
      std::vector<sat::lit> c1 = base;
      c1.push_back(~f_[copy][g][m]);
      c1.push_back(n);
      b_.add_clause(std::move(c1));
      std::vector<sat::lit> c2 = std::move(base);
      c2.push_back(f_[copy][g][m]);
      c2.push_back(~n);
      b_.add_clause(std::move(c2));
    }
  }

  std::vector<sat::lit> po_vals = candidate_values(-1, sig, po_cands_);
  for (int o = 0; o < params_.n_outputs; ++o) {
    sat::lit po = b_.new_lit(var_role::io, "po c" + std::to_string(copy) + " o" +
                                               std::to_string(o));
    const std::vector<sat::lit>& sels = posel_[copy][o];
    for (size_t d = 0; d < po_vals.size(); ++d) {
      b_.add_clause({~sels[d], ~po_vals[d], po});
      b_.add_clause({~sels[d], po_vals[d], ~po});
    }
    sig.outputs.push_back(po);
  }
  return sig;
}

instance_signals encoder::instantiate(int copy, bool fault_machinery) {
  return instantiate_impl(copy, fault_machinery, nullptr, nullptr);
}

miter_signals encoder::build_miter(probe_mode pm, int probe_budget, bool fault_mode) {
  if (copies_ != 2) throw std::runtime_error("miter needs two configuration copies");
  int G = params_.n_gates();
  miter_signals ms;
  ms.probes = pm;
  ms.fault = fault_mode;
  ms.copy[0] = instantiate_impl(0, fault_mode, nullptr, nullptr);
  ms.copy[1] = instantiate_impl(1, fault_mode, nullptr, &ms.copy[0]);

  if (pm == probe_mode::budget) {
    for (int g = 0; g < G; ++g)
      ms.probe_sel.push_back(b_.new_lit(var_role::io, "Probe g" + std::to_string(g)));
    b_.at_most_k(ms.probe_sel, probe_budget, var_role::io);
  }

  std::vector<sat::lit> terms;
  for (int o = 0; o < params_.n_outputs; ++o) {
    sat::lit t = b_.new_lit(var_role::io);
    sat::lit a = ms.copy[0].outputs[o], b = ms.copy[1].outputs[o];
    b_.add_clause({~t, a, b});
    b_.add_clause({~t, ~a, ~b});
    terms.push_back(t);
  }
  if (pm != probe_mode::off) {
    for (int g = 0; g < G; ++g) {
      sat::lit t = b_.new_lit(var_role::io);
      if (pm == probe_mode::budget) b_.add_clause({~t, ms.probe_sel[g]});
      sat::lit a = ms.copy[0].node_fe[g], b = ms.copy[1].node_fe[g];
      b_.add_clause({~t, a, b});
      b_.add_clause({~t, ~a, ~b});
      terms.push_back(t);
    }
  }
  ms.diff = b_.new_lit(var_role::io, "diff");
  std::vector<sat::lit> big{~ms.diff};
  for (sat::lit t : terms) big.push_back(t);
  b_.add_clause(std::move(big));
  return ms;
}

instance_signals encoder::add_observation(const observation_record& rec, int copy) {
  instance_signals sig = instantiate_impl(copy, false, &rec.q, nullptr);
  if (static_cast<int>(rec.outputs.size()) != params_.n_outputs)
    throw std::runtime_error("observation output length mismatch");
  for (int o = 0; o < params_.n_outputs; ++o)
    b_.add_clause({rec.outputs[o] ? sig.outputs[o] : ~sig.outputs[o]});
  for (const auto& [ref, bit] : rec.probed) {
    if (ref.kind != node_kind::gate_output || ref.index >= params_.n_gates())
      throw std::runtime_error("probed node out of model range");
    sat::lit v = sig.node_fe[ref.index];
    b_.add_clause({bit ? v : ~v});
  }
  return sig;
}

netlist encoder::decode(int copy, const netlist* name_template) const {
  int G = params_.n_gates();
  netlist out;
  out.n_inputs = params_.n_inputs;
  if (name_template) {
    if (name_template->n_inputs != params_.n_inputs ||
        name_template->n_outputs() != params_.n_outputs || name_template->n_gates() != G)
      throw std::runtime_error("name template shape mismatch");
    out.input_names = name_template->input_names;
    out.gate_names = name_template->gate_names;
    out.output_names = name_template->output_names;
  } else {
    for (int i = 0; i < params_.n_inputs; ++i) out.input_names.push_back("in" + std::to_string(i));
    for (int g = 0; g < G; ++g) out.gate_names.push_back("g" + std::to_string(g));
    for (int o = 0; o < params_.n_outputs; ++o)
      out.output_names.push_back("out" + std::to_string(o));
  }

  for (int g = 0; g < G; ++g) {
    int k = params_.gate_arities[g];
    gate gt;
    gt.id = g;
    gt.function.arity = k;
    for (unsigned m = 0; m < (1u << k); ++m)
      gt.function.bits.push_back(b_.model(f_[copy][g][m]));
    for (int j = 0; j < k; ++j) {
      node_ref chosen{};
      bool found = false;
      for (size_t d = 0; d < pin_cands_[g].size(); ++d)
        if (b_.model(sel_[copy][g][j][d])) {
          chosen = pin_cands_[g][d];
          found = true;
          break;
        }
      if (!found) throw std::runtime_error("model selects no driver for a pin");
      gt.pins.push_back(chosen);
    }
    out.gates.push_back(std::move(gt));
  }
  for (int o = 0; o < params_.n_outputs; ++o) {
    node_ref chosen{};
    bool found = false;
    for (size_t d = 0; d < po_cands_.size(); ++d)
      if (b_.model(posel_[copy][o][d])) {
        chosen = po_cands_[d];
        found = true;
        break;
      }
    if (!found) throw std::runtime_error("model selects no driver for an output");
    out.outputs.push_back(chosen);
  }
  return out;
}

void encoder::block_config(const netlist& first, int copy) {
  int G = params_.n_gates();
  if (first.n_gates() != G || first.n_inputs != params_.n_inputs ||
      first.n_outputs() != params_.n_outputs)
    throw std::runtime_error("blocked netlist shape mismatch");

  std::vector<sat::lit> blocking;
  for (int g = 0; g < G; ++g) {
    int k = params_.gate_arities[g];
    if (first.gates[g].arity() != k) throw std::runtime_error("blocked netlist arity mismatch");
    gate cg = canonical_gate(first.gates[g]);

    sat::lit match = b_.new_lit(var_role::connection);
    std::vector<node_ref> tuple = cg.pins;  // sorted; next_permutation covers the multiset
    do {
      std::vector<sat::lit> clause;
      for (int j = 0; j < k; ++j) clause.push_back(~pin_sel(copy, g, j, tuple[j]));
      for (unsigned m = 0; m < (1u << k); ++m) {
        // Skip rows where tied pins disagree; they cannot occur.
        bool reachable = true;
        for (int i = 0; i < k && reachable; ++i)
          for (int j = i + 1; j < k && reachable; ++j)
            if (tuple[i] == tuple[j] && ((m >> i & 1) != (m >> j & 1))) reachable = false;
        if (!reachable) continue;
        // Row of the canonical table carrying the same driver values.
        unsigned cm = 0;
        for (int p = 0; p < k; ++p) {
          bool val = false;
          for (int j = 0; j < k; ++j)
            if (tuple[j] == cg.pins[p]) {
              val = m >> j & 1;
              break;
            }
          if (val) cm |= 1u << p;
        }
        bool want = cg.function.bits[cm];
        clause.push_back(want ? ~f_[copy][g][m] : f_[copy][g][m]);
      }
      clause.push_back(match);
      b_.add_clause(std::move(clause));
    } while (std::next_permutation(tuple.begin(), tuple.end()));
    blocking.push_back(~match);
  }
  for (int o = 0; o < params_.n_outputs; ++o)
    blocking.push_back(~po_sel(copy, o, first.outputs[o]));
  b_.add_clause(std::move(blocking));
}

void encoder::fix_config(const netlist& truth, int copy) {
  int G = params_.n_gates();
  if (truth.n_gates() != G || truth.n_inputs != params_.n_inputs ||
      truth.n_outputs() != params_.n_outputs)
    throw std::runtime_error("config netlist shape mismatch");
  for (int g = 0; g < G; ++g) {
    const gate& gt = truth.gates[g];
    if (gt.arity() != params_.gate_arities[g])
      throw std::runtime_error("config netlist arity mismatch");
    for (unsigned m = 0; m < (1u << gt.arity()); ++m)
      b_.add_clause({gt.function.bits[m] ? f_[copy][g][m] : ~f_[copy][g][m]});
    for (int j = 0; j < gt.arity(); ++j) b_.add_clause({pin_sel(copy, g, j, gt.pins[j])});
  }
  for (int o = 0; o < params_.n_outputs; ++o)
    b_.add_clause({po_sel(copy, o, truth.outputs[o])});
}

int encoder::decoded_level(int copy, int g) const {
  int L = params_.n_gates();
  for (int i = 0; i <= L; ++i)
    if (b_.model(lvl_.at(copy).at(g).at(i))) return i;
  return L + 1;
}

}  // namespace netlift
