// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "netlift/attack.hpp"

namespace netlift {

// Machine-readable run artifact. Wall time is carried under "wall_s" so
// deterministic fields can be compared with it stripped.
std::string report_to_json(const attack_report& rep);

// Aligned human-readable summary.
void print_report(std::ostream& out, const attack_report& rep);

std::string cnf_stats_to_json(const cnf_stats& s);

// One row of the benchmark grid.
struct bench_cell {
  std::string circuit;
  bool probe = false;
  bool fault = false;
  bool failed = false;  // harness error, not attack timeout
  std::string error;
  attack_report report;
};

void print_bench_table(std::ostream& out, const std::vector<bench_cell>& cells);
std::string bench_to_json(const std::vector<bench_cell>& cells);

}  // namespace netlift
