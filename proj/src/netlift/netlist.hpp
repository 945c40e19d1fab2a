// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace netlift {

// Error carrying the 1-based line number of the offending netlist line.
struct parse_error : std::runtime_error {
  int line;
  parse_error(int line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what_) : std::runtime_error(what_) {}
};

enum class node_kind : uint8_t { primary_input = 0, gate_output = 1 };

// Reference to a value-producing node: a primary input or a gate's output.
struct node_ref {
  node_kind kind = node_kind::primary_input;
  int index = 0;

  friend auto operator<=>(const node_ref&, const node_ref&) = default;
};

inline node_ref pi_ref(int i) { return {node_kind::primary_input, i}; }
inline node_ref gate_ref(int i) { return {node_kind::gate_output, i}; }

// Truth table over `arity` pins; bit m gives the output for the row where
// pin j carries bit j of m (pin 0 is the least significant bit).
struct truth_table {
  int arity = 0;
  std::vector<bool> bits;

  bool row(unsigned m) const { return bits.at(m); }
  friend bool operator==(const truth_table&, const truth_table&) = default;
};

struct gate {
  int id = 0;
  truth_table function;
  std::vector<node_ref> pins;

  int arity() const { return static_cast<int>(pins.size()); }
  friend bool operator==(const gate&, const gate&) = default;
};

// Combinational circuit: primary inputs, gates wired to drivers, and primary
// outputs each connected to one driver. Node names are kept for text I/O and
// logs; structural comparisons ignore them.
struct netlist {
  int n_inputs = 0;
  std::vector<gate> gates;
  std::vector<node_ref> outputs;
  std::vector<std::string> input_names;
  std::vector<std::string> gate_names;
  std::vector<std::string> output_names;

  int n_outputs() const { return static_cast<int>(outputs.size()); }
  int n_gates() const { return static_cast<int>(gates.size()); }

  bool valid_ref(node_ref r) const;
  const std::string& node_name(node_ref r) const;
  // Resolves an input or gate name; throws validation_error if unknown.
  node_ref ref_by_name(const std::string& name) const;

  // Enforces all structural invariants (ref validity, arity/table sizes,
  // no self-loops, acyclicity). Throws validation_error.
  void validate() const;
};

netlist parse_netlist(std::istream& in);
netlist parse_netlist(const std::string& text);
netlist load_netlist(const std::string& path);
std::string serialize_netlist(const netlist& n);

// Truth table from its row-0-first bit string, e.g. "0001" for 2-input AND.
truth_table tt_from_bits(const std::string& bits);

bool is_acyclic(const netlist& n);

// Gate ids ordered so that every gate appears after all gates it reads from.
// Ties are broken by ascending gate id. Throws validation_error naming the
// gates on a cycle if the wiring is cyclic.
std::vector<int> topological_order(const netlist& n);

// Pins sorted (primary inputs first, then gate outputs, by index) with the
// truth table rows permuted so the represented function is unchanged. Rows
// unreachable because two pins share a driver are normalized to the value of
// their reachable representative. Idempotent.
gate canonical_gate(const gate& g);

// True iff same I/O counts, identical primary-output drivers, and every gate
// matches by id after canonicalization. Names are ignored.
bool structural_equal(const netlist& a, const netlist& b);

}  // namespace netlift
