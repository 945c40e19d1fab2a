// SPDX-License-Identifier: Apache-2.0
#include "netlift/feasible.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "json.hpp"

namespace netlift {

probe_trace_set collect_traces(const netlist& truth,
                               const std::vector<std::vector<bool>>& vectors) {
  probe_trace_set out;
  out.n_inputs = truth.n_inputs;
  out.n_gates = truth.n_gates();
  std::vector<node_ref> probes = all_gate_outputs(truth);
  for (const std::vector<bool>& v : vectors) {
    observation_record rec = observe(truth, make_query(truth, v, std::nullopt, probes));
    valuation row;
    row.pi = v;
    row.gate_out.resize(truth.n_gates());
    for (const auto& [ref, bit] : rec.probed) row.gate_out[ref.index] = bit;
    out.rows.push_back(std::move(row));
  }
  return out;
}

namespace {

// Visits every non-decreasing index tuple of length `arity` over `n` items.
template <typename F>
void for_each_multiset(int n, int arity, F&& body) {
  std::vector<int> idx(arity, 0);
  for (;;) {
    body(idx);
    int p = arity - 1;
    while (p >= 0 && idx[p] == n - 1) --p;
    if (p < 0) return;
    int v = idx[p] + 1;
    for (int q = p; q < arity; ++q) idx[q] = v;
  }
}

bool tuple_deterministic(const probe_trace_set& traces, const std::vector<node_ref>& tuple,
                         node_ref target) {
  // Key = tuple values as bits; value = target's bit + 1 (0 = unseen).
  std::vector<int8_t> seen(size_t{1} << tuple.size(), 0);
  for (const valuation& row : traces.rows) {
    unsigned key = 0;
    for (size_t j = 0; j < tuple.size(); ++j)
      if (row.value(tuple[j])) key |= 1u << j;
    int8_t want = row.value(target) ? 2 : 1;
    if (seen[key] == 0)
      seen[key] = want;
    else if (seen[key] != want)
      return false;
  }
  return true;
}

}  // namespace

std::vector<std::vector<node_ref>> feasible_tuples(const probe_trace_set& traces, int arity,
                                                   const std::vector<node_ref>& candidates,
                                                   node_ref target) {
  std::vector<std::vector<node_ref>> out;
  if (candidates.empty()) return out;
  std::vector<node_ref> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  for_each_multiset(static_cast<int>(sorted.size()), arity, [&](const std::vector<int>& idx) {
    std::vector<node_ref> tuple;
    tuple.reserve(idx.size());
    for (int i : idx) tuple.push_back(sorted[i]);
    if (tuple_deterministic(traces, tuple, target)) out.push_back(std::move(tuple));
  });
  return out;
}

feasible_set feasible_sets(const probe_trace_set& traces, const std::vector<int>& arities) {
  feasible_set fs;
  for (size_t g = 0; g < arities.size(); ++g) {
    std::vector<node_ref> cands;
    for (int i = 0; i < traces.n_inputs; ++i) cands.push_back(pi_ref(i));
    for (int h = 0; h < traces.n_gates; ++h)
      if (h != static_cast<int>(g)) cands.push_back(gate_ref(h));
    fs.by_gate.push_back(
        feasible_tuples(traces, arities[g], cands, gate_ref(static_cast<int>(g))));
  }
  return fs;
}

int emit_blocking(const feasible_set& fs, encoder& enc, cnf_builder& b, int copy) {
  const model_params& p = enc.params();
  if (fs.by_gate.size() != static_cast<size_t>(p.n_gates()))
    throw std::runtime_error("feasible set does not match model gate count");
  int excluded = 0;
  for (int g = 0; g < p.n_gates(); ++g) {
    std::set<std::vector<node_ref>> feasible(fs.by_gate[g].begin(), fs.by_gate[g].end());
    int k = p.gate_arities[g];
    std::vector<node_ref> cands = enc.pin_candidates(g);
    std::sort(cands.begin(), cands.end());
    std::vector<int> idx(k, 0);
    for_each_multiset(static_cast<int>(cands.size()), k, [&](const std::vector<int>& ix) {
      std::vector<node_ref> tuple;
      for (int i : ix) tuple.push_back(cands[i]);
      if (feasible.count(tuple)) return;
      ++excluded;
      std::vector<node_ref> perm = tuple;
      do {
        std::vector<sat::lit> clause;
        for (int j = 0; j < k; ++j) clause.push_back(~enc.pin_sel(copy, g, j, perm[j]));
        b.add_clause(std::move(clause));
      } while (std::next_permutation(perm.begin(), perm.end()));
    });
  }
  return excluded;
}

std::vector<std::vector<bool>> default_filter_vectors(int n_inputs, int exhaustive_limit,
                                                      size_t random_count, uint64_t seed) {
  std::vector<std::vector<bool>> out;
  if (n_inputs <= exhaustive_limit) {
    for (unsigned long long m = 0; m < (1ull << n_inputs); ++m)
      out.push_back(vector_from_index(n_inputs, m));
    return out;
  }
  std::mt19937_64 rng(seed);
  std::set<std::vector<bool>> dedupe;
  while (dedupe.size() < random_count) {
    std::vector<bool> v(n_inputs);
    for (int i = 0; i < n_inputs; ++i) v[i] = rng() & 1;
    dedupe.insert(std::move(v));
  }
  out.assign(dedupe.begin(), dedupe.end());
  return out;
}

std::string feasible_to_json(const feasible_set& fs, const netlist& names) {
  nlohmann::json j = nlohmann::json::object();
  for (size_t g = 0; g < fs.by_gate.size(); ++g) {
    nlohmann::json tuples = nlohmann::json::array();
    for (const std::vector<node_ref>& t : fs.by_gate[g]) {
      nlohmann::json names_t = nlohmann::json::array();
      for (node_ref r : t) names_t.push_back(names.node_name(r));
      tuples.push_back(std::move(names_t));
    }
    j[names.gate_names.at(g)] = std::move(tuples);
  }
  return j.dump(2);
}

}  // namespace netlift
