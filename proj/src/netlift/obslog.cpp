// SPDX-License-Identifier: Apache-2.0
#include "netlift/obslog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace netlift {

namespace {

std::string bits_to_string(const std::vector<bool>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (bool b : bits) s += b ? '1' : '0';
  return s;
}

std::vector<bool> string_to_bits(const std::string& s, int lineno) {
  std::vector<bool> out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw parse_error(lineno, "bitstring must contain only 0/1");
    out.push_back(c == '1');
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_record(const netlist& n, const observation_record& rec) {
  std::ostringstream out;
  out << "v=" << bits_to_string(rec.q.vector);
  if (rec.q.fault)
    out << " f=" << n.node_name(rec.q.fault->target) << ':' << (rec.q.fault->value ? '1' : '0');
  if (!rec.q.probes.empty()) {
    out << " p=";
    for (size_t i = 0; i < rec.q.probes.size(); ++i)
      out << (i ? "," : "") << n.node_name(rec.q.probes[i]);
  }
  out << " o=" << bits_to_string(rec.outputs);
  if (!rec.probed.empty()) {
    out << " r=";
    bool first = true;
    for (node_ref p : rec.q.probes) {
      out << (first ? "" : ",") << n.node_name(p) << ':' << (rec.probed.at(p) ? '1' : '0');
      first = false;
    }
  }
  return out.str();
}

observation_record parse_record(const netlist& n, const std::string& line, int lineno) {
  std::istringstream ss(line.substr(0, line.find('#')));
  observation_record rec;
  bool have_v = false, have_o = false;
  std::string tok;
  while (ss >> tok) {
    size_t eq = tok.find('=');
    if (eq == std::string::npos || eq != 1)
      throw parse_error(lineno, "expected key=value field, got '" + tok + "'");
    char key = tok[0];
    std::string val = tok.substr(2);
    switch (key) {
      case 'v':
        rec.q.vector = string_to_bits(val, lineno);
        have_v = true;
        break;
      case 'f': {
        std::vector<std::string> parts = split(val, ':');
        if (parts.size() != 2 || (parts[1] != "0" && parts[1] != "1"))
          throw parse_error(lineno, "fault field must be <node>:<0|1>");
        rec.q.fault = fault_spec{n.ref_by_name(parts[0]), parts[1] == "1"};
        break;
      }
      case 'p':
        for (const std::string& name : split(val, ','))
          rec.q.probes.push_back(n.ref_by_name(name));
        break;
      case 'o':
        rec.outputs = string_to_bits(val, lineno);
        have_o = true;
        break;
      case 'r':
        for (const std::string& item : split(val, ',')) {
          std::vector<std::string> parts = split(item, ':');
          if (parts.size() != 2 || (parts[1] != "0" && parts[1] != "1"))
            throw parse_error(lineno, "probed field must be <node>:<0|1>,...");
          rec.probed[n.ref_by_name(parts[0])] = parts[1] == "1";
        }
        break;
      default:
        throw parse_error(lineno, std::string("unknown field key '") + key + "'");
    }
  }
  if (!have_v || !have_o) throw parse_error(lineno, "record needs v= and o= fields");
  if (static_cast<int>(rec.q.vector.size()) != n.n_inputs)
    throw parse_error(lineno, "vector length does not match circuit inputs");
  if (static_cast<int>(rec.outputs.size()) != n.n_outputs())
    throw parse_error(lineno, "output length does not match circuit outputs");
  if (rec.q.fault && rec.q.fault->target.kind != node_kind::gate_output)
    throw parse_error(lineno, "fault target must be a gate output");
  for (node_ref p : rec.q.probes)
    if (p.kind != node_kind::gate_output)
      throw parse_error(lineno, "probes must name gate outputs");
  std::vector<node_ref> keys;
  for (auto& [ref, bit] : rec.probed) keys.push_back(ref);
  std::vector<node_ref> probes = rec.q.probes;
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  if (keys != probes) throw parse_error(lineno, "p= nodes and r= nodes differ");
  rec.q.probes = std::move(probes);
  return rec;
}

void save_log(const netlist& n, const std::vector<observation_record>& log, std::ostream& out) {
  for (const observation_record& rec : log) out << format_record(n, rec) << '\n';
}

std::vector<observation_record> load_log(const netlist& n, std::istream& in) {
  std::vector<observation_record> log;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line.substr(0, line.find('#'));
    if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
    log.push_back(parse_record(n, body, lineno));
  }
  return log;
}

void save_log_file(const netlist& n, const std::vector<observation_record>& log,
                   const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write log file: " + path);
  save_log(n, log, f);
}

std::vector<observation_record> load_log_file(const netlist& n, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open log file: " + path);
  return load_log(n, f);
}

}  // namespace netlift
