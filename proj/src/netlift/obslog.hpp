// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "netlift/oracle.hpp"

namespace netlift {

// Observation log text format: one record per line, whitespace-separated
// `key=value` fields in this order:
//
//   v=<input bits>            input vector, bit i of the string is input i
//   f=<node>:<0|1>            injected stuck-at fault (omitted if none)
//   p=<node>,<node>,...       probed nodes (omitted if none)
//   o=<output bits>           primary outputs, bit i is output i
//   r=<node>:<bit>,...        probed values, same nodes as p= (omitted if none)
//
// `#` starts a comment; blank lines are ignored. Node names are the netlist's
// names, which never contain whitespace, '#', ':', ',' or '='.

std::string format_record(const netlist& n, const observation_record& rec);
observation_record parse_record(const netlist& n, const std::string& line, int lineno = 0);

void save_log(const netlist& n, const std::vector<observation_record>& log, std::ostream& out);
std::vector<observation_record> load_log(const netlist& n, std::istream& in);
void save_log_file(const netlist& n, const std::vector<observation_record>& log,
                   const std::string& path);
std::vector<observation_record> load_log_file(const netlist& n, const std::string& path);

}  // namespace netlift
