// SPDX-License-Identifier: Apache-2.0
#include "netlift/netlist.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace netlift {

bool netlist::valid_ref(node_ref r) const {
  if (r.index < 0) return false;
  if (r.kind == node_kind::primary_input) return r.index < n_inputs;
  return r.index < n_gates();
}

const std::string& netlist::node_name(node_ref r) const {
  if (!valid_ref(r)) throw validation_error("node reference out of range");
  return r.kind == node_kind::primary_input ? input_names.at(r.index) : gate_names.at(r.index);
}

node_ref netlist::ref_by_name(const std::string& name) const {
  for (int i = 0; i < n_inputs; ++i)
    if (input_names[i] == name) return pi_ref(i);
  for (int i = 0; i < n_gates(); ++i)
    if (gate_names[i] == name) return gate_ref(i);
  throw validation_error("unknown node name: " + name);
}

void netlist::validate() const {
  if (n_inputs < 0) throw validation_error("negative input count");
  if (static_cast<int>(input_names.size()) != n_inputs ||
      static_cast<int>(gate_names.size()) != n_gates() ||
      output_names.size() != outputs.size())
    throw validation_error("name table size mismatch");
  for (int i = 0; i < n_gates(); ++i) {
    const gate& g = gates[i];
    if (g.id != i) throw validation_error("gate id does not match its position");
    if (g.arity() < 1) throw validation_error("gate " + gate_names[i] + " has no pins");
    if (g.arity() > 20) throw validation_error("gate " + gate_names[i] + " arity too large");
    if (g.function.arity != g.arity())
      throw validation_error("gate " + gate_names[i] + " truth table arity mismatch");
    if (g.function.bits.size() != (size_t{1} << g.arity()))
      throw validation_error("gate " + gate_names[i] + " truth table size mismatch");
    for (node_ref p : g.pins) {
      if (!valid_ref(p)) throw validation_error("gate " + gate_names[i] + " pin out of range");
      if (p == gate_ref(i))
        throw validation_error("gate " + gate_names[i] + " reads its own output");
    }
  }
  for (node_ref o : outputs)
    if (!valid_ref(o)) throw validation_error("output driver out of range");
  topological_order(*this);
}

namespace {

struct raw_gate {
  int line;
  std::string name;
  std::string tt;
  std::vector<std::string> drivers;
};

struct raw_connect {
  int line;
  std::string output;
  std::string driver;
};

std::vector<std::string> tokenize(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

netlist parse_netlist(std::istream& in) {
  netlist n;
  std::vector<raw_gate> raw_gates;
  std::vector<raw_connect> raw_connects;
  std::map<std::string, int> declared;  // name -> declaring line

  auto check_name = [](const std::string& name, int line) {
    if (name.find_first_of(":,=") != std::string::npos)
      throw parse_error(line, "name '" + name + "' contains a reserved character (: , =)");
  };
  auto declare = [&](const std::string& name, int line) {
    check_name(name, line);
    auto [it, fresh] = declared.emplace(name, line);
    if (!fresh)
      throw parse_error(line, "name '" + name + "' already declared on line " +
                                  std::to_string(it->second));
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> tok = tokenize(line);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    if (kw == "input") {
      if (tok.size() < 2) throw parse_error(lineno, "input line lists no names");
      for (size_t i = 1; i < tok.size(); ++i) {
        declare(tok[i], lineno);
        n.input_names.push_back(tok[i]);
      }
    } else if (kw == "output") {
      if (tok.size() < 2) throw parse_error(lineno, "output line lists no names");
      for (size_t i = 1; i < tok.size(); ++i) {
        check_name(tok[i], lineno);
        n.output_names.push_back(tok[i]);
      }
    } else if (kw == "gate") {
      if (tok.size() < 4) throw parse_error(lineno, "gate line needs a name, tt: and drivers");
      raw_gate rg;
      rg.line = lineno;
      rg.name = tok[1];
      if (tok[2].rfind("tt:", 0) != 0) throw parse_error(lineno, "expected tt:<bits>");
      rg.tt = tok[2].substr(3);
      rg.drivers.assign(tok.begin() + 3, tok.end());
      declare(rg.name, lineno);
      raw_gates.push_back(std::move(rg));
    } else if (kw == "connect") {
      if (tok.size() != 3) throw parse_error(lineno, "connect needs an output name and a driver");
      raw_connects.push_back({lineno, tok[1], tok[2]});
    } else {
      throw parse_error(lineno, "unknown directive '" + kw + "'");
    }
  }

  n.n_inputs = static_cast<int>(n.input_names.size());
  std::map<std::string, node_ref> by_name;
  for (int i = 0; i < n.n_inputs; ++i) by_name[n.input_names[i]] = pi_ref(i);
  for (size_t i = 0; i < raw_gates.size(); ++i) {
    n.gate_names.push_back(raw_gates[i].name);
    by_name[raw_gates[i].name] = gate_ref(static_cast<int>(i));
  }

  auto resolve = [&](const std::string& name, int line) {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw parse_error(line, "undeclared node '" + name + "'");
    return it->second;
  };

  for (size_t i = 0; i < raw_gates.size(); ++i) {
    const raw_gate& rg = raw_gates[i];
    gate g;
    g.id = static_cast<int>(i);
    size_t k = rg.drivers.size();
    if (rg.tt.size() != (size_t{1} << k))
      throw parse_error(rg.line, "gate '" + rg.name + "' lists " + std::to_string(k) +
                                     " drivers but tt has " + std::to_string(rg.tt.size()) +
                                     " bits (want " + std::to_string(size_t{1} << k) + ")");
    g.function.arity = static_cast<int>(k);
    for (char c : rg.tt) {
      if (c != '0' && c != '1') throw parse_error(rg.line, "tt bits must be 0 or 1");
      g.function.bits.push_back(c == '1');
    }
    for (const std::string& d : rg.drivers) {
      node_ref r = resolve(d, rg.line);
      if (r == gate_ref(g.id))
        throw parse_error(rg.line, "gate '" + rg.name + "' reads its own output");
      g.pins.push_back(r);
    }
    n.gates.push_back(std::move(g));
  }

  n.outputs.assign(n.output_names.size(), node_ref{});
  std::vector<int> connected(n.output_names.size(), 0);
  for (const raw_connect& rc : raw_connects) {
    auto it = std::find(n.output_names.begin(), n.output_names.end(), rc.output);
    if (it == n.output_names.end())
      throw parse_error(rc.line, "'" + rc.output + "' is not a declared output");
    size_t oi = static_cast<size_t>(it - n.output_names.begin());
    if (connected[oi]++)
      throw parse_error(rc.line, "output '" + rc.output + "' connected twice");
    n.outputs[oi] = resolve(rc.driver, rc.line);
  }
  for (size_t oi = 0; oi < connected.size(); ++oi)
    if (!connected[oi])
      throw parse_error(lineno, "output '" + n.output_names[oi] + "' never connected");

  try {
    n.validate();
  } catch (const validation_error& e) {
    throw parse_error(lineno, e.what());
  }
  return n;
}

netlist parse_netlist(const std::string& text) {
  std::istringstream ss(text);
  return parse_netlist(ss);
}

netlist load_netlist(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open netlist file: " + path);
  return parse_netlist(f);
}

std::string serialize_netlist(const netlist& n) {
  std::ostringstream out;
  if (n.n_inputs > 0) {
    out << "input";
    for (const std::string& s : n.input_names) out << ' ' << s;
    out << '\n';
  }
  if (!n.output_names.empty()) {
    out << "output";
    for (const std::string& s : n.output_names) out << ' ' << s;
    out << '\n';
  }
  for (const gate& g : n.gates) {
    out << "gate " << n.gate_names[g.id] << " tt:";
    for (bool b : g.function.bits) out << (b ? '1' : '0');
    for (node_ref p : g.pins) out << ' ' << n.node_name(p);
    out << '\n';
  }
  for (size_t oi = 0; oi < n.outputs.size(); ++oi)
    out << "connect " << n.output_names[oi] << ' ' << n.node_name(n.outputs[oi]) << '\n';
  return out.str();
}

truth_table tt_from_bits(const std::string& bits) {
  truth_table t;
  size_t n = bits.size();
  if (n == 0 || (n & (n - 1)) != 0) throw validation_error("truth table size must be a power of two");
  while ((size_t{1} << t.arity) < n) ++t.arity;
  for (char c : bits) {
    if (c != '0' && c != '1') throw validation_error("truth table bits must be 0 or 1");
    t.bits.push_back(c == '1');
  }
  return t;
}

bool is_acyclic(const netlist& n) {
  int g = n.n_gates();
  std::vector<int> deps(g, 0);
  std::vector<std::vector<int>> fanout(g);
  for (const gate& gt : n.gates)
    for (node_ref p : gt.pins)
      if (p.kind == node_kind::gate_output) {
        ++deps[gt.id];
        fanout[p.index].push_back(gt.id);
      }
  std::vector<int> ready;
  for (int i = 0; i < g; ++i)
    if (deps[i] == 0) ready.push_back(i);
  int placed = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++placed;
    for (int f : fanout[v])
      if (--deps[f] == 0) ready.push_back(f);
  }
  return placed == g;
}

std::vector<int> topological_order(const netlist& n) {
  int g = n.n_gates();
  std::vector<int> deps(g, 0);
  std::vector<std::vector<int>> fanout(g);
  for (const gate& gt : n.gates)
    for (node_ref p : gt.pins)
      if (p.kind == node_kind::gate_output) {
        ++deps[gt.id];
        fanout[p.index].push_back(gt.id);
      }
  std::vector<int> order;
  order.reserve(g);
  std::vector<bool> placed(g, false);
  // Small circuits: scan for the lowest-id ready gate each round.
  for (int step = 0; step < g; ++step) {
    int pick = -1;
    for (int i = 0; i < g; ++i)
      if (!placed[i] && deps[i] == 0) {
        pick = i;
        break;
      }
    if (pick < 0) break;
    placed[pick] = true;
    order.push_back(pick);
    for (int f : fanout[pick]) --deps[f];
  }
  if (static_cast<int>(order.size()) != g) {
    std::string cyc;
    for (int i = 0; i < g; ++i)
      if (!placed[i]) cyc += (cyc.empty() ? "" : ", ") + std::to_string(i);
    throw validation_error("wiring cycle through gates {" + cyc + "}");
  }
  return order;
}

gate canonical_gate(const gate& g) {
  int k = g.arity();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int a, int b) { return g.pins[a] < g.pins[b]; });

  gate out;
  out.id = g.id;
  out.pins.resize(k);
  for (int j = 0; j < k; ++j) out.pins[j] = g.pins[perm[j]];
  out.function.arity = k;
  out.function.bits.resize(size_t{1} << k);
  for (unsigned m = 0; m < (1u << k); ++m) {
    unsigned old_row = 0;
    for (int j = 0; j < k; ++j)
      if (m >> j & 1u) old_row |= 1u << perm[j];
    out.function.bits[m] = g.function.bits[old_row];
  }
  // Rows where tied pins disagree can never occur; give them the value of the
  // row where every pin in the tie group copies the group's first pin.
  for (unsigned m = 0; m < (1u << k); ++m) {
    unsigned rep = 0;
    for (int j = 0; j < k; ++j) {
      int lead = j;
      for (int t = 0; t < j; ++t)
        if (out.pins[t] == out.pins[j]) {
          lead = t;
          break;
        }
      if (m >> lead & 1u) rep |= 1u << j;
    }
    if (rep != m) out.function.bits[m] = out.function.bits[rep];
  }
  return out;
}

bool structural_equal(const netlist& a, const netlist& b) {
  if (a.n_inputs != b.n_inputs || a.n_outputs() != b.n_outputs() || a.n_gates() != b.n_gates())
    return false;
  if (a.outputs != b.outputs) return false;
  for (int i = 0; i < a.n_gates(); ++i) {
    gate ca = canonical_gate(a.gates[i]);
    gate cb = canonical_gate(b.gates[i]);
    if (ca.pins != cb.pins || ca.function != cb.function) return false;
  }
  return true;
}

}  // namespace netlift
