// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "netlift/encoder.hpp"
#include "netlift/feasible.hpp"
#include "netlift/obslog.hpp"

namespace netlift {

struct attack_config {
  probe_mode probes = probe_mode::all;
  int probe_budget = 0;
  bool fault = true;
  std::optional<std::vector<truth_table>> whitelist;
  uint64_t max_iters = 1000000;
  double timeout_s = 14400.0;
  uint64_t seed = 0;
  bool prefilter = false;           // feasible-tuple warm start (needs probing)
  size_t prefilter_random = 256;    // sample size when inputs are too wide
  bool require_fanout = true;
  bool anchor_po_level = false;
  bool levelization = true;
  backend_kind backend = backend_kind::embedded;
  std::string solver_command;
};

enum class attack_status { recovered, timeout, iteration_cap };
const char* attack_status_name(attack_status s);

struct attack_report {
  attack_status status = attack_status::timeout;
  std::optional<netlist> recovered;
  std::optional<bool> unique;      // empty = undetermined within budget
  std::optional<netlist> witness;  // second survivor when unique == false
  std::optional<bool> structural_match;
  bool replay_ok = false;
  uint64_t iterations = 0;
  uint64_t prefilter_queries = 0;
  int prefilter_excluded = 0;
  double wall_s = 0.0;
  cnf_stats cnf;
  sat::solver_stats solver;
  std::vector<observation_record> log;
  uint64_t seed = 0;
  bool seed_honored = true;
};

// Full oracle-guided loop against `truth` (reachable only through observe):
// find a discriminating query, observe, constrain, repeat until no two
// log-consistent configurations differ observably; then extract a candidate,
// test uniqueness by structural blocking, and compare against the truth.
attack_report run_attack(const netlist& truth, const attack_config& cfg);

// Runs the attack, then keeps blocking until no further structurally distinct
// log-consistent configuration exists (or `cap` is hit). Survivors are in
// canonical form and include the first recovered candidate.
struct survivor_set {
  attack_report report;
  std::vector<netlist> survivors;
  bool complete = false;
};
survivor_set enumerate_survivors(const netlist& truth, const attack_config& cfg, int cap);

// Independent exhaustive enumeration of whitelist configurations of `params`
// consistent with `log`, canonicalized and deduplicated. Throws if the space
// exceeds `limit` configurations.
std::vector<netlist> brute_force_survivors(const model_params& params,
                                           const std::vector<truth_table>& whitelist,
                                           const std::vector<observation_record>& log,
                                           uint64_t limit = 200000000);

// Canonical serialized form for set comparisons of survivor netlists.
std::string canonical_text(const netlist& n);

// AND, OR, NAND, NOR, XOR, XNOR at arity 2.
std::vector<truth_table> default_function_whitelist();

}  // namespace netlift
