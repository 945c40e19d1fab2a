// SPDX-License-Identifier: Apache-2.0
//
// netlift: recover the gate-level schematic of a fully camouflaged
// combinational circuit by querying it as a black box. Subcommands cover the
// full loop (attack), benchmarking (bench), oracle simulation (simulate),
// CNF export (encode), the feasible-tuple filter (filter), and a standalone
// DIMACS solver (solve-dimacs).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "netlift/attack.hpp"
#include "netlift/obslog.hpp"
#include "netlift/report.hpp"
#include "netlift/sat/dimacs.hpp"

namespace {

using namespace netlift;

std::optional<std::vector<truth_table>> parse_functions(const std::string& spec) {
  if (spec.empty() || spec == "none") return std::nullopt;
  if (spec == "default") return default_function_whitelist();
  std::vector<truth_table> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(tt_from_bits(tok));
  }
  if (out.empty()) throw CLI::ValidationError("--functions", "no truth tables in '" + spec + "'");
  return out;
}

void parse_probe(const std::string& spec, probe_mode& mode, int& budget) {
  if (spec == "off") {
    mode = probe_mode::off;
  } else if (spec == "all") {
    mode = probe_mode::all;
  } else if (spec.rfind("budget=", 0) == 0) {
    mode = probe_mode::budget;
    budget = std::stoi(spec.substr(7));
    if (budget <= 0) throw CLI::ValidationError("--probe", "budget must be positive");
  } else {
    throw CLI::ValidationError("--probe", "expected off, all, or budget=<k>");
  }
}

std::vector<bool> parse_bits(const std::string& s) {
  std::vector<bool> v;
  for (char c : s) {
    if (c != '0' && c != '1') throw CLI::ValidationError("vector", "bits must be 0 or 1");
    v.push_back(c == '1');
  }
  return v;
}

backend_kind resolve_backend(const std::string& name, std::string& command) {
  if (name == "embedded") return backend_kind::embedded;
  if (name != "subprocess") throw CLI::ValidationError("--backend", "embedded or subprocess");
  if (command.empty()) {
    const char* env = std::getenv(external_solver_env);
    if (!env || !*env)
      throw CLI::ValidationError(
          "--backend", std::string("subprocess needs --solver-cmd or $") + external_solver_env);
    command = env;
  }
  return backend_kind::subprocess;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

int cmd_attack(const std::string& path, attack_config cfg, const std::string& report_path,
               const std::string& log_path, const std::string& emit_path, int enumerate_cap) {
  netlist truth = load_netlist(path);
  if (enumerate_cap > 0) {
    survivor_set ss = enumerate_survivors(truth, cfg, enumerate_cap);
    print_report(std::cout, ss.report);
    std::cout << "survivors: " << ss.survivors.size() << (ss.complete ? "" : "+") << "\n";
    for (size_t i = 0; i < ss.survivors.size(); ++i)
      std::cout << "# survivor " << i << "\n" << canonical_text(ss.survivors[i]);
    if (!report_path.empty()) open_out(report_path) << report_to_json(ss.report) << "\n";
    if (!log_path.empty()) save_log_file(truth, ss.report.log, log_path);
    return ss.report.status == attack_status::recovered ? 0
           : ss.report.status == attack_status::timeout ? 2
                                                        : 3;
  }
  attack_report rep = run_attack(truth, cfg);
  print_report(std::cout, rep);
  if (!report_path.empty()) open_out(report_path) << report_to_json(rep) << "\n";
  if (!log_path.empty()) save_log_file(truth, rep.log, log_path);
  if (!emit_path.empty() && rep.recovered) {
    if (emit_path == "-")
      std::cout << serialize_netlist(*rep.recovered);
    else
      open_out(emit_path) << serialize_netlist(*rep.recovered);
  }
  switch (rep.status) {
    case attack_status::recovered: return 0;
    case attack_status::timeout: return 2;
    case attack_status::iteration_cap: return 3;
  }
  return 1;
}

int cmd_bench(const std::vector<std::string>& paths, const std::string& functions, double timeout,
              uint64_t seed, const std::string& json_path) {
  std::vector<bench_cell> cells;
  for (const std::string& path : paths) {
    netlist truth = load_netlist(path);
    std::string name = path;
    if (size_t pos = name.find_last_of('/'); pos != std::string::npos) name = name.substr(pos + 1);
    for (bool probe : {true, false}) {
      for (bool fault : {true, false}) {
        bench_cell cell;
        cell.circuit = name;
        cell.probe = probe;
        cell.fault = fault;
        attack_config cfg;
        cfg.probes = probe ? probe_mode::all : probe_mode::off;
        cfg.fault = fault;
        cfg.whitelist = parse_functions(functions);
        cfg.timeout_s = timeout;
        cfg.seed = seed;
        std::cout << name << " probe=" << (probe ? "on" : "off")
                  << " fault=" << (fault ? "on" : "off") << " ... " << std::flush;
        try {
          cell.report = run_attack(truth, cfg);
          std::cout << attack_status_name(cell.report.status) << " ("
                    << cell.report.iterations << " queries, " << cell.report.wall_s << " s)\n";
        } catch (const std::exception& e) {
          cell.failed = true;
          cell.error = e.what();
          std::cout << "error: " << cell.error << "\n";
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  std::cout << "\n";
  print_bench_table(std::cout, cells);
  if (!json_path.empty()) open_out(json_path) << bench_to_json(cells) << "\n";
  return 0;
}

int cmd_simulate(const std::string& path, const std::vector<std::string>& vectors, bool exhaustive,
                 const std::string& fault_str, const std::string& probe_str, bool probe_all) {
  netlist n = load_netlist(path);
  std::optional<fault_spec> fault;
  if (!fault_str.empty()) {
    size_t colon = fault_str.find_last_of(':');
    if (colon == std::string::npos || colon + 2 != fault_str.size() ||
        (fault_str[colon + 1] != '0' && fault_str[colon + 1] != '1'))
      throw CLI::ValidationError("--fault", "expected <gate>:<0|1>");
    fault = fault_spec{n.ref_by_name(fault_str.substr(0, colon)), fault_str[colon + 1] == '1'};
  }
  std::vector<node_ref> probes;
  if (probe_all) {
    probes = all_gate_outputs(n);
  } else if (!probe_str.empty()) {
    std::stringstream ss(probe_str);
    std::string tok;
    while (std::getline(ss, tok, ',')) probes.push_back(n.ref_by_name(tok));
  }
  std::vector<std::vector<bool>> vs;
  if (exhaustive) {
    if (n.n_inputs > 20) throw std::runtime_error("too many inputs for --exhaustive");
    for (unsigned long long m = 0; m < (1ull << n.n_inputs); ++m)
      vs.push_back(vector_from_index(n.n_inputs, m));
  }
  for (const std::string& s : vectors) vs.push_back(parse_bits(s));
  if (vs.empty()) throw CLI::ValidationError("simulate", "need --vector or --exhaustive");
  for (const std::vector<bool>& v : vs)
    std::cout << format_record(n, observe(n, make_query(n, v, fault, probes))) << "\n";
  return 0;
}

int cmd_encode(const std::string& path, int copies, const std::string& probe_str, bool fault,
               const std::string& functions, bool no_fanout, bool anchor_po, bool no_levels,
               const std::string& out_path, bool role_map) {
  netlist n = load_netlist(path);
  model_params params = model_params::shape_of(n);
  params.allowed_functions = parse_functions(functions);
  params.require_fanout = !no_fanout;
  params.anchor_po_level = anchor_po;
  params.levelization = !no_levels;
  probe_mode pm = probe_mode::all;
  int budget = 0;
  parse_probe(probe_str, pm, budget);

  cnf_builder b;
  encoder enc(params, b, copies);
  enc.build_skeleton();
  enc.add_levelization();
  if (copies == 2)
    enc.build_miter(pm, budget, fault);
  else
    enc.instantiate(0, fault);

  if (out_path.empty() || out_path == "-")
    b.export_dimacs(std::cout, role_map);
  else {
    auto f = open_out(out_path);
    b.export_dimacs(f, role_map);
  }
  const cnf_stats& s = b.stats();
  std::cerr << "vars " << s.vars << " clauses " << s.clauses;
  for (int r = 0; r < n_var_roles; ++r)
    std::cerr << " " << var_role_name(static_cast<var_role>(r)) << " " << s.vars_by_role[r];
  std::cerr << "\n";
  return 0;
}

int cmd_filter(const std::string& path, size_t random_count, uint64_t seed, bool as_json) {
  netlist n = load_netlist(path);
  probe_trace_set traces =
      collect_traces(n, default_filter_vectors(n.n_inputs, 12, random_count, seed));
  feasible_set fs = feasible_sets(traces, model_params::shape_of(n).gate_arities);
  if (as_json) {
    std::cout << feasible_to_json(fs, n) << "\n";
    return 0;
  }
  for (int g = 0; g < n.n_gates(); ++g)
    std::cout << n.node_name(gate_ref(g)) << ": " << fs.by_gate[g].size()
              << " feasible driver tuples\n";
  return 0;
}

int cmd_solve_dimacs(const std::string& path, uint64_t seed, double timeout,
                     uint64_t max_conflicts) {
  sat::dimacs_problem prob;
  if (path == "-") {
    prob = sat::parse_dimacs(std::cin);
  } else {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    prob = sat::parse_dimacs(f);
  }
  sat::solver s;
  s.set_seed(seed);
  for (int i = 0; i < prob.n_vars; ++i) s.new_var();
  for (const std::vector<sat::lit>& c : prob.clauses) s.add_clause(c);
  sat::solve_limits limits;
  limits.max_conflicts = max_conflicts;
  if (timeout > 0)
    limits.deadline = std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(timeout));
  sat::solve_status st = s.solve({}, limits);
  if (st == sat::solve_status::unknown) {
    std::cout << "s UNKNOWN\n";
    return 0;
  }
  if (st == sat::solve_status::unsat) {
    std::cout << "s UNSATISFIABLE\n";
    return 20;
  }
  std::cout << "s SATISFIABLE\n";
  std::cout << "v";
  for (int v = 0; v < prob.n_vars; ++v) {
    std::cout << " " << (s.model_value(v) ? v + 1 : -(v + 1));
    if (v % 32 == 31 && v + 1 < prob.n_vars) std::cout << "\nv";
  }
  std::cout << " 0\n";
  return 10;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gate-level schematic recovery for fully camouflaged circuits"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- attack ----
  auto* atk = app.add_subcommand("attack", "run the oracle-guided recovery loop");
  std::string atk_path, atk_probe = "all", atk_functions = "none", atk_backend = "embedded";
  std::string atk_solver_cmd, atk_report, atk_log, atk_emit;
  attack_config cfg;
  bool atk_no_fanout = false, atk_no_levels = false;
  int atk_enumerate = 0;
  atk->add_option("netlist", atk_path, "hidden circuit (oracle side)")->required();
  atk->add_option("--probe", atk_probe, "off, all, or budget=<k> probes per query");
  atk->add_flag("--fault,!--no-fault", cfg.fault, "allow one stuck-at injection per query");
  atk->add_option("--functions", atk_functions,
                  "gate function space: none (all), default (AND,OR,NAND,NOR,XOR,XNOR), or "
                  "comma-separated truth tables");
  atk->add_option("--seed", cfg.seed, "decision-order seed (embedded backend)");
  atk->add_option("--timeout", cfg.timeout_s, "wall-clock budget in seconds");
  atk->add_option("--max-iters", cfg.max_iters, "query cap");
  atk->add_flag("--prefilter", cfg.prefilter, "feasible-tuple warm start (needs probing)");
  atk->add_option("--prefilter-random", cfg.prefilter_random,
                  "prefilter sample size for wide inputs");
  atk->add_flag("--no-fanout-req", atk_no_fanout, "allow dangling gate outputs");
  atk->add_flag("--anchor-po", cfg.anchor_po_level, "pin output drivers to level 1");
  atk->add_flag("--no-levelization", atk_no_levels, "drop acyclicity constraints (unsound)");
  atk->add_option("--backend", atk_backend, "embedded or subprocess");
  atk->add_option("--solver-cmd", atk_solver_cmd, "external DIMACS solver command");
  atk->add_option("--report", atk_report, "write a JSON report here");
  atk->add_option("--log", atk_log, "write the observation log here");
  atk->add_option("--emit", atk_emit, "write the recovered netlist here (- for stdout)");
  atk->add_option("--enumerate", atk_enumerate, "list up to N distinct surviving configurations");
  atk->callback([&] {
    cfg.whitelist = parse_functions(atk_functions);
    parse_probe(atk_probe, cfg.probes, cfg.probe_budget);
    cfg.require_fanout = !atk_no_fanout;
    cfg.levelization = !atk_no_levels;
    cfg.backend = resolve_backend(atk_backend, atk_solver_cmd);
    cfg.solver_command = atk_solver_cmd;
    exit_code = cmd_attack(atk_path, cfg, atk_report, atk_log, atk_emit, atk_enumerate);
  });

  // ---- bench ----
  auto* ben = app.add_subcommand("bench", "attack each circuit with and without probes/faults");
  std::vector<std::string> ben_paths;
  std::string ben_functions = "none", ben_json;
  double ben_timeout = 600.0;
  uint64_t ben_seed = 0;
  ben->add_option("netlists", ben_paths, "circuits to attack")->required();
  ben->add_option("--functions", ben_functions, "gate function space (as in attack)");
  ben->add_option("--timeout", ben_timeout, "per-cell wall-clock budget in seconds");
  ben->add_option("--seed", ben_seed, "decision-order seed");
  ben->add_option("--json", ben_json, "write cell reports as JSON here");
  ben->callback(
      [&] { exit_code = cmd_bench(ben_paths, ben_functions, ben_timeout, ben_seed, ben_json); });

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "query the oracle directly");
  std::string sim_path, sim_fault, sim_probe;
  std::vector<std::string> sim_vectors;
  bool sim_exhaustive = false, sim_probe_all = false;
  sim->add_option("netlist", sim_path, "circuit to simulate")->required();
  sim->add_option("--vector", sim_vectors, "input bits, char i = input i (repeatable)");
  sim->add_flag("--exhaustive", sim_exhaustive, "all input vectors in index order");
  sim->add_option("--fault", sim_fault, "stuck-at injection <gate>:<0|1>");
  sim->add_option("--probe", sim_probe, "comma-separated gate outputs to read");
  sim->add_flag("--probe-all", sim_probe_all, "read every gate output");
  sim->callback([&] {
    exit_code =
        cmd_simulate(sim_path, sim_vectors, sim_exhaustive, sim_fault, sim_probe, sim_probe_all);
  });

  // ---- encode ----
  auto* enc = app.add_subcommand("encode", "export the unknown-circuit CNF as DIMACS");
  std::string enc_path, enc_probe = "all", enc_functions = "none", enc_out;
  int enc_copies = 2;
  bool enc_fault = true, enc_no_fanout = false, enc_anchor = false, enc_no_levels = false;
  bool enc_no_role_map = false;
  enc->add_option("netlist", enc_path, "circuit fixing only the shape (counts and arities)")
      ->required();
  enc->add_option("--copies", enc_copies, "1 evaluation or 2-copy miter")
      ->check(CLI::Range(1, 2));
  enc->add_option("--probe", enc_probe, "off, all, or budget=<k> (miter only)");
  enc->add_flag("--fault,!--no-fault", enc_fault, "include fault-injection machinery");
  enc->add_option("--functions", enc_functions, "gate function space (as in attack)");
  enc->add_flag("--no-fanout-req", enc_no_fanout, "allow dangling gate outputs");
  enc->add_flag("--anchor-po", enc_anchor, "pin output drivers to level 1");
  enc->add_flag("--no-levelization", enc_no_levels, "drop acyclicity constraints");
  enc->add_option("--out", enc_out, "output path (- or empty for stdout)");
  enc->add_flag("--no-role-map", enc_no_role_map, "omit variable-role comments");
  enc->callback([&] {
    exit_code = cmd_encode(enc_path, enc_copies, enc_probe, enc_fault, enc_functions,
                           enc_no_fanout, enc_anchor, enc_no_levels, enc_out, !enc_no_role_map);
  });

  // ---- filter ----
  auto* fil = app.add_subcommand("filter", "feasible driver tuples from fault-free probe traces");
  std::string fil_path;
  size_t fil_random = 256;
  uint64_t fil_seed = 1;
  bool fil_json = false;
  fil->add_option("netlist", fil_path, "circuit to trace")->required();
  fil->add_option("--random", fil_random, "sample size when inputs are too wide to exhaust");
  fil->add_option("--seed", fil_seed, "sampling seed");
  fil->add_flag("--json", fil_json, "emit the full tuple sets as JSON");
  fil->callback([&] { exit_code = cmd_filter(fil_path, fil_random, fil_seed, fil_json); });

  // ---- solve-dimacs ----
  auto* sd = app.add_subcommand("solve-dimacs", "solve a DIMACS CNF with the embedded solver");
  std::string sd_path;
  uint64_t sd_seed = 0, sd_conflicts = std::numeric_limits<uint64_t>::max();
  double sd_timeout = 0.0;
  sd->add_option("cnf", sd_path, "DIMACS file (- for stdin)")->required();
  sd->add_option("--seed", sd_seed, "decision-order seed");
  sd->add_option("--timeout", sd_timeout, "wall-clock budget in seconds (0 = none)");
  sd->add_option("--max-conflicts", sd_conflicts, "conflict budget");
  sd->callback(
      [&] { exit_code = cmd_solve_dimacs(sd_path, sd_seed, sd_timeout, sd_conflicts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
