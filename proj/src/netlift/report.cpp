// SPDX-License-Identifier: Apache-2.0
#include "netlift/report.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace netlift {

using nlohmann::json;

namespace {

json cnf_stats_json(const cnf_stats& s) {
  json roles = json::object();
  for (int r = 0; r < n_var_roles; ++r)
    roles[var_role_name(static_cast<var_role>(r))] = s.vars_by_role[r];
  return json{{"vars", s.vars}, {"clauses", s.clauses}, {"vars_by_role", roles}};
}

json report_json(const attack_report& rep) {
  json j;
  j["status"] = attack_status_name(rep.status);
  j["iterations"] = rep.iterations;
  j["wall_s"] = rep.wall_s;
  j["unique"] = rep.unique ? json(*rep.unique) : json(nullptr);
  j["structural_match"] =
      rep.structural_match ? json(*rep.structural_match) : json(nullptr);
  j["replay_consistent"] = rep.replay_ok;
  j["recovered"] = rep.recovered ? json(serialize_netlist(*rep.recovered)) : json(nullptr);
  j["witness"] = rep.witness ? json(serialize_netlist(*rep.witness)) : json(nullptr);
  j["cnf"] = cnf_stats_json(rep.cnf);
  j["solver"] = {{"conflicts", rep.solver.conflicts},
                 {"decisions", rep.solver.decisions},
                 {"propagations", rep.solver.propagations},
                 {"restarts", rep.solver.restarts}};
  j["prefilter"] = {{"queries", rep.prefilter_queries}, {"excluded", rep.prefilter_excluded}};
  j["observations"] = rep.log.size();
  j["seed"] = rep.seed;
  j["seed_honored"] = rep.seed_honored;
  return j;
}

}  // namespace

std::string report_to_json(const attack_report& rep) { return report_json(rep).dump(2); }

std::string cnf_stats_to_json(const cnf_stats& s) { return cnf_stats_json(s).dump(2); }

void print_report(std::ostream& out, const attack_report& rep) {
  auto opt = [](const std::optional<bool>& b) {
    return !b ? "unknown" : (*b ? "yes" : "no");
  };
  out << "status            " << attack_status_name(rep.status) << '\n'
      << "iterations        " << rep.iterations << '\n'
      << "wall time         " << std::fixed << std::setprecision(3) << rep.wall_s << " s\n"
      << "unique            " << opt(rep.unique) << '\n'
      << "structural match  " << opt(rep.structural_match) << '\n'
      << "replay consistent " << (rep.replay_ok ? "yes" : "no") << '\n'
      << "observations      " << rep.log.size() << '\n';
  if (rep.prefilter_queries)
    out << "prefilter         " << rep.prefilter_queries << " queries, "
        << rep.prefilter_excluded << " tuples excluded\n";
  out << "cnf               " << rep.cnf.vars << " vars, " << rep.cnf.clauses << " clauses\n";
  int64_t total = rep.cnf.vars ? rep.cnf.vars : 1;
  for (int r = 0; r < n_var_roles; ++r) {
    double pct = 100.0 * static_cast<double>(rep.cnf.vars_by_role[r]) / static_cast<double>(total);
    out << "  " << std::left << std::setw(14) << var_role_name(static_cast<var_role>(r))
        << std::right << std::setw(10) << rep.cnf.vars_by_role[r] << "  (" << std::fixed
        << std::setprecision(1) << pct << "%)\n";
  }
  out << "solver            " << rep.solver.conflicts << " conflicts, " << rep.solver.decisions
      << " decisions, " << rep.solver.propagations << " propagations\n";
}

void print_bench_table(std::ostream& out, const std::vector<bench_cell>& cells) {
  out << std::left << std::setw(14) << "circuit" << std::setw(7) << "probe" << std::setw(7)
      << "fault" << std::setw(13) << "status" << std::right << std::setw(10) << "time(s)"
      << std::setw(7) << "iters" << "  " << std::left << std::setw(9) << "unique" << std::setw(11)
      << "structural" << std::right << std::setw(9) << "vars" << std::setw(10) << "clauses"
      << '\n';
  auto opt = [](const std::optional<bool>& b) {
    return std::string(!b ? "unknown" : (*b ? "yes" : "no"));
  };
  for (const bench_cell& c : cells) {
    out << std::left << std::setw(14) << c.circuit << std::setw(7) << (c.probe ? "yes" : "no")
        << std::setw(7) << (c.fault ? "yes" : "no");
    if (c.failed) {
      out << "error: " << c.error << '\n';
      continue;
    }
    std::ostringstream t;
    t << std::fixed << std::setprecision(2) << c.report.wall_s;
    out << std::setw(13) << attack_status_name(c.report.status) << std::right << std::setw(10)
        << t.str() << std::setw(7) << c.report.iterations << "  " << std::left << std::setw(9)
        << opt(c.report.unique) << std::setw(11) << opt(c.report.structural_match) << std::right
        << std::setw(9) << c.report.cnf.vars << std::setw(10) << c.report.cnf.clauses << '\n';
  }
}

std::string bench_to_json(const std::vector<bench_cell>& cells) {
  json rows = json::array();
  for (const bench_cell& c : cells) {
    json row{{"circuit", c.circuit}, {"probe", c.probe}, {"fault", c.fault}};
    if (c.failed) {
      row["error"] = c.error;
    } else {
      row["report"] = json::parse(report_to_json(c.report));
    }
    rows.push_back(std::move(row));
  }
  return rows.dump(2);
}

}  // namespace netlift
