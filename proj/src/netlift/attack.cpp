// SPDX-License-Identifier: Apache-2.0
#include "netlift/attack.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>

namespace netlift {

const char* attack_status_name(attack_status s) {
  switch (s) {
    case attack_status::recovered: return "Recovered";
    case attack_status::timeout: return "Timeout";
    case attack_status::iteration_cap: return "IterationCap";
  }
  return "?";
}

std::vector<truth_table> default_function_whitelist() {
  return {tt_from_bits("0001"), tt_from_bits("0111"), tt_from_bits("1110"),
          tt_from_bits("1000"), tt_from_bits("0110"), tt_from_bits("1001")};
}

std::string canonical_text(const netlist& n) {
  netlist c = n;
  c.input_names.clear();
  c.gate_names.clear();
  c.output_names.clear();
  for (int i = 0; i < c.n_inputs; ++i) c.input_names.push_back("in" + std::to_string(i));
  for (int g = 0; g < c.n_gates(); ++g) c.gate_names.push_back("g" + std::to_string(g));
  for (int o = 0; o < c.n_outputs(); ++o) c.output_names.push_back("out" + std::to_string(o));
  for (gate& g : c.gates) g = canonical_gate(g);
  return serialize_netlist(c);
}

namespace {

using clock = std::chrono::steady_clock;

model_params params_for(const netlist& truth, const attack_config& cfg) {
  model_params p = model_params::shape_of(truth);
  p.allowed_functions = cfg.whitelist;
  p.require_fanout = cfg.require_fanout;
  p.anchor_po_level = cfg.anchor_po_level;
  p.levelization = cfg.levelization;
  return p;
}

struct budget_exhausted {};

struct engine {
  const netlist& truth;
  const attack_config& cfg;
  clock::time_point t0;
  clock::time_point deadline;
  cnf_builder b;
  encoder enc;
  miter_signals miter;
  attack_report rep;

  engine(const netlist& truth_, const attack_config& cfg_)
      : truth(truth_),
        cfg(cfg_),
        t0(clock::now()),
        deadline(t0 + std::chrono::duration_cast<clock::duration>(
                          std::chrono::duration<double>(cfg_.timeout_s))),
        b(cfg_.backend, cfg_.solver_command),
        enc(params_for(truth_, cfg_), b, 2) {
    if (cfg.timeout_s <= 0) throw std::runtime_error("timeout must be positive");
    if (cfg.max_iters == 0) throw std::runtime_error("iteration cap must be positive");
    b.set_seed(cfg.seed);
    rep.seed = cfg.seed;
    rep.seed_honored = cfg.backend == backend_kind::embedded;
    enc.build_skeleton();
    enc.add_levelization();
    miter = enc.build_miter(cfg.probes, cfg.probe_budget, cfg.fault);
    if (cfg.prefilter) prefilter();
  }

  sat::solve_limits limits() const { return {.deadline = deadline}; }

  void note_observation(const observation_record& rec) {
    rep.log.push_back(rec);
    enc.add_observation(rec, 0);
    enc.add_observation(rec, 1);
  }

  void prefilter() {
    if (cfg.probes == probe_mode::off)
      throw std::runtime_error("the feasible-tuple prefilter needs probing enabled");
    std::vector<std::vector<bool>> vectors =
        default_filter_vectors(truth.n_inputs, 12, cfg.prefilter_random, cfg.seed + 1);
    probe_trace_set traces;
    traces.n_inputs = truth.n_inputs;
    traces.n_gates = truth.n_gates();
    std::vector<node_ref> probes = all_gate_outputs(truth);
    for (const std::vector<bool>& v : vectors) {
      observation_record rec = observe(truth, make_query(truth, v, std::nullopt, probes));
      valuation row;
      row.pi = v;
      row.gate_out.resize(truth.n_gates());
      for (const auto& [ref, bit] : rec.probed) row.gate_out[ref.index] = bit;
      traces.rows.push_back(std::move(row));
      note_observation(rec);
    }
    feasible_set fs = feasible_sets(traces, enc.params().gate_arities);
    rep.prefilter_excluded = emit_blocking(fs, enc, b, 0);
    emit_blocking(fs, enc, b, 1);
    rep.prefilter_queries = vectors.size();
  }

  query query_from_model() {
    std::vector<bool> vec;
    for (sat::lit x : miter.copy[0].inputs) vec.push_back(b.model(x));
    std::optional<fault_spec> fault;
    if (miter.fault) {
      for (size_t g = 0; g < miter.copy[0].inject_fault.size(); ++g)
        if (b.model(miter.copy[0].inject_fault[g])) {
          fault = fault_spec{gate_ref(static_cast<int>(g)), b.model(miter.copy[0].fault_val)};
          break;
        }
    }
    std::vector<node_ref> probes;
    if (miter.probes == probe_mode::all) {
      probes = all_gate_outputs(truth);
    } else if (miter.probes == probe_mode::budget) {
      for (size_t g = 0; g < miter.probe_sel.size(); ++g)
        if (b.model(miter.probe_sel[g])) probes.push_back(gate_ref(static_cast<int>(g)));
    }
    return make_query(truth, std::move(vec), fault, std::move(probes));
  }

  // True when no discriminating query remains; false on a budget stop.
  bool cegis() {
    for (;;) {
      if (rep.iterations >= cfg.max_iters) {
        rep.status = attack_status::iteration_cap;
        return false;
      }
      sat::solve_status st = b.solve({miter.diff}, limits());
      if (st == sat::solve_status::unknown) {
        rep.status = attack_status::timeout;
        return false;
      }
      if (st == sat::solve_status::unsat) return true;
      note_observation(observe(truth, query_from_model()));
      ++rep.iterations;
    }
  }

  bool extract() {
    sat::solve_status st = b.solve({}, limits());
    if (st == sat::solve_status::unknown) {
      rep.status = attack_status::timeout;
      return false;
    }
    if (st == sat::solve_status::unsat)
      throw std::runtime_error("observation log became unsatisfiable; encoder/oracle disagree");
    netlist cand = enc.decode(0, &truth);
    cand.validate();
    rep.replay_ok = replay_consistent(cand, rep.log);
    rep.structural_match = structural_equal(cand, truth);
    rep.recovered = std::move(cand);
    rep.status = attack_status::recovered;
    return true;
  }

  // Returns the next structurally distinct log-consistent configuration, if
  // any, blocking it as a side effect. nullopt on UNSAT; throws on budget.
  std::optional<netlist> next_survivor(const netlist& block_me) {
    enc.block_config(block_me, 0);
    sat::solve_status st = b.solve({}, limits());
    if (st == sat::solve_status::unknown) throw budget_exhausted{};
    if (st == sat::solve_status::unsat) return std::nullopt;
    netlist w = enc.decode(0, &truth);
    w.validate();
    return w;
  }

  void uniqueness() {
    try {
      std::optional<netlist> w = next_survivor(*rep.recovered);
      rep.unique = !w.has_value();
      if (w) rep.witness = std::move(*w);
    } catch (const budget_exhausted&) {
      rep.unique = std::nullopt;  // undetermined within budget
    }
  }

  void finalize() {
    rep.cnf = b.stats();
    if (cfg.backend == backend_kind::embedded) rep.solver = b.solver_statistics();
    rep.wall_s = std::chrono::duration<double>(clock::now() - t0).count();
  }
};

}  // namespace

attack_report run_attack(const netlist& truth, const attack_config& cfg) {
  truth.validate();
  engine e(truth, cfg);
  if (e.cegis() && e.extract()) e.uniqueness();
  e.finalize();
  return std::move(e.rep);
}

survivor_set enumerate_survivors(const netlist& truth, const attack_config& cfg, int cap) {
  truth.validate();
  engine e(truth, cfg);
  survivor_set out;
  if (e.cegis() && e.extract()) {
    out.survivors.push_back(*e.rep.recovered);
    try {
      for (;;) {
        if (static_cast<int>(out.survivors.size()) >= cap) break;
        std::optional<netlist> w = e.next_survivor(out.survivors.back());
        if (!w) {
          out.complete = true;
          break;
        }
        out.survivors.push_back(std::move(*w));
      }
    } catch (const budget_exhausted&) {
      out.complete = false;
    }
    e.rep.unique = out.complete ? std::optional<bool>(out.survivors.size() == 1) : std::nullopt;
    if (out.survivors.size() > 1) {
      e.rep.unique = false;
      e.rep.witness = out.survivors[1];
    }
  }
  e.finalize();
  out.report = std::move(e.rep);
  return out;
}

std::vector<netlist> brute_force_survivors(const model_params& params,
                                           const std::vector<truth_table>& whitelist,
                                           const std::vector<observation_record>& log,
                                           uint64_t limit) {
  int G = params.n_gates();
  struct option {
    std::vector<node_ref> pins;
    truth_table tt;
  };
  std::vector<std::vector<option>> options(G);
  for (int g = 0; g < G; ++g) {
    std::vector<node_ref> cands;
    for (int i = 0; i < params.n_inputs; ++i) cands.push_back(pi_ref(i));
    for (int h = 0; h < G; ++h)
      if (h != g) cands.push_back(gate_ref(h));
    int k = params.gate_arities[g];
    std::set<std::pair<std::vector<node_ref>, std::vector<bool>>> seen;
    std::vector<size_t> idx(k, 0);
    for (;;) {
      for (const truth_table& tt : whitelist) {
        if (tt.arity != k) continue;
        gate gt;
        gt.id = g;
        gt.function = tt;
        for (size_t i : idx) gt.pins.push_back(cands[i]);
        gate cg = canonical_gate(gt);
        if (seen.insert({cg.pins, cg.function.bits}).second)
          options[g].push_back({cg.pins, cg.function});
      }
      int p = k - 1;
      while (p >= 0 && idx[p] + 1 == cands.size()) --p;
      if (p < 0) break;
      ++idx[p];
      for (int q = p + 1; q < k; ++q) idx[q] = 0;
    }
  }

  std::vector<node_ref> po_cands;
  for (int i = 0; i < params.n_inputs; ++i) po_cands.push_back(pi_ref(i));
  for (int h = 0; h < G; ++h) po_cands.push_back(gate_ref(h));

  uint64_t total = 1;
  for (int g = 0; g < G; ++g) {
    total *= options[g].size();
    if (total > limit) throw std::runtime_error("configuration space exceeds brute-force limit");
  }
  for (int o = 0; o < params.n_outputs; ++o) {
    total *= po_cands.size();
    if (total > limit) throw std::runtime_error("configuration space exceeds brute-force limit");
  }

  netlist n;
  n.n_inputs = params.n_inputs;
  for (int i = 0; i < params.n_inputs; ++i) n.input_names.push_back("in" + std::to_string(i));
  for (int g = 0; g < G; ++g) n.gate_names.push_back("g" + std::to_string(g));
  for (int o = 0; o < params.n_outputs; ++o) n.output_names.push_back("out" + std::to_string(o));
  n.gates.resize(G);
  n.outputs.assign(params.n_outputs, node_ref{});

  std::vector<netlist> survivors;
  std::set<std::string> seen_text;
  std::vector<size_t> pick(G, 0);
  std::vector<size_t> po_pick(params.n_outputs, 0);

  auto fanout_ok = [&]() {
    if (!params.require_fanout) return true;
    for (int g = 0; g < G; ++g) {
      bool read = false;
      for (int h = 0; h < G && !read; ++h) {
        if (h == g) continue;
        for (node_ref p : n.gates[h].pins)
          if (p == gate_ref(g)) {
            read = true;
            break;
          }
      }
      for (int o = 0; o < params.n_outputs && !read; ++o)
        if (n.outputs[o] == gate_ref(g)) read = true;
      if (!read) return false;
    }
    return true;
  };

  auto check_current = [&]() {
    if (!is_acyclic(n) || !fanout_ok()) return;
    if (!replay_consistent(n, log)) return;
    std::string key = canonical_text(n);
    if (seen_text.insert(key).second) survivors.push_back(n);
  };

  // Odometer over per-gate options and per-output drivers.
  for (;;) {
    for (int g = 0; g < G; ++g) {
      const option& op = options[g][pick[g]];
      n.gates[g].id = g;
      n.gates[g].pins = op.pins;
      n.gates[g].function = op.tt;
    }
    for (;;) {
      for (int o = 0; o < params.n_outputs; ++o) n.outputs[o] = po_cands[po_pick[o]];
      check_current();
      int p = params.n_outputs - 1;
      while (p >= 0 && po_pick[p] + 1 == po_cands.size()) --p;
      if (p < 0) break;
      ++po_pick[p];
      for (int q = p + 1; q < params.n_outputs; ++q) po_pick[q] = 0;
    }
    std::fill(po_pick.begin(), po_pick.end(), 0);
    int p = G - 1;
    while (p >= 0 && pick[p] + 1 == options[p].size()) --p;
    if (p < 0) break;
    ++pick[p];
    for (int q = p + 1; q < G; ++q) pick[q] = 0;
  }

  std::sort(survivors.begin(), survivors.end(), [](const netlist& a, const netlist& b) {
    return canonical_text(a) < canonical_text(b);
  });
  return survivors;
}

}  // namespace netlift
