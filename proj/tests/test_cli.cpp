// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "netlift/netlist.hpp"
#include "netlift/obslog.hpp"
#include "netlift/oracle.hpp"
#include "netlift/sat/dimacs.hpp"

using namespace netlift;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("netlift_cli_" + std::to_string(getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

struct run_result {
  int code = -1;
  std::string out;
  std::string err;
};

run_result run(const std::string& args) {
  static int seq = 0;
  fs::path out = scratch() / ("out" + std::to_string(seq));
  fs::path err = scratch() / ("err" + std::to_string(seq));
  ++seq;
  std::string cmd = std::string(NETLIFT_CLI_PATH) + " " + args + " >" + out.string() + " 2>" +
                    err.string();
  int rc = std::system(cmd.c_str());
  run_result r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string fixture(const char* name) { return std::string(NETLIFT_FIXTURE_DIR) + "/" + name; }

fs::path two_gate_path() {
  fs::path p = scratch() / "two.net";
  spit(p,
       "input a b\noutput y\ngate g0 tt:0001 a b\ngate g1 tt:0110 g0 b\nconnect y g1\n");
  return p;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("attack writes a report, a replayable log, and the recovered netlist") {
  fs::path rep = scratch() / "c17_report.json";
  fs::path log = scratch() / "c17_log.txt";
  fs::path emit = scratch() / "c17_out.net";
  run_result r = run("attack " + fixture("c17.net") + " --probe all --fault --report " +
                     rep.string() + " --log " + log.string() + " --emit " + emit.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("Recovered") != std::string::npos);

  nlohmann::json j = nlohmann::json::parse(slurp(rep));
  CHECK(j["status"] == "Recovered");
  CHECK(j["structural_match"] == true);
  CHECK(j["unique"] == true);
  CHECK(j["replay_consistent"] == true);
  CHECK(j["cnf"]["vars"].get<int64_t>() > 0);

  netlist truth = load_netlist(fixture("c17.net"));
  netlist recovered = load_netlist(emit.string());
  CHECK(structural_equal(recovered, truth));

  std::vector<observation_record> records = load_log_file(truth, log.string());
  CHECK(records.size() == j["iterations"].get<uint64_t>());
  CHECK(replay_consistent(truth, records));
}

TEST_CASE("attack exit codes distinguish the stop reasons") {
  CHECK(run("attack " + fixture("c17.net") + " --probe off --no-fault --max-iters 3").code == 3);
  CHECK(run("attack " + fixture("c17.net") +
            " --probe off --no-fault --timeout 0.05 --max-iters 1000000")
            .code == 2);
}

TEST_CASE("simulate prints oracle records in the log format") {
  netlist n = load_netlist(fixture("c17.net"));
  query q = make_query(n, {true, false, true, true, false},
                       fault_spec{n.ref_by_name("g11"), false}, all_gate_outputs(n));
  std::string want = format_record(n, observe(n, q)) + "\n";
  run_result r =
      run("simulate " + fixture("c17.net") + " --vector 10110 --fault g11:0 --probe-all");
  CHECK(r.code == 0);
  CHECK(r.out == want);

  run_result ex = run("simulate " + fixture("c17.net") + " --exhaustive");
  CHECK(ex.code == 0);
  CHECK(count_lines(ex.out) == 32);

  run_result bad = run("simulate " + fixture("c17.net") + " --vector 10110 --fault in1:1");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("encode exports a parsable DIMACS formula with a role map") {
  fs::path cnf = scratch() / "c17.cnf";
  run_result r = run("encode " + fixture("c17.net") + " --copies 2 --probe all --fault --out " +
                     cnf.string());
  CHECK(r.code == 0);
  CHECK(r.err.find("vars") != std::string::npos);
  CHECK(r.err.find("clauses") != std::string::npos);

  std::string text = slurp(cnf);
  CHECK(text.find("c role ") != std::string::npos);
  std::ifstream f(cnf);
  sat::dimacs_problem p = sat::parse_dimacs(f);
  CHECK(p.n_vars > 0);
  CHECK(!p.clauses.empty());

  fs::path plain = scratch() / "c17_plain.cnf";
  run_result r1 = run("encode " + fixture("c17.net") + " --copies 1 --no-role-map --out " +
                      plain.string());
  CHECK(r1.code == 0);
  CHECK(slurp(plain).find("c role ") == std::string::npos);
}

TEST_CASE("solve-dimacs reports verdicts through output and exit code") {
  fs::path satf = scratch() / "sat.cnf";
  spit(satf, "p cnf 2 2\n1 2 0\n-1 0\n");
  run_result r = run("solve-dimacs " + satf.string());
  CHECK(r.code == 10);
  CHECK(r.out.find("s SATISFIABLE") != std::string::npos);
  CHECK(r.out.find("v ") != std::string::npos);
  // The only model is x1 false, x2 true.
  CHECK(r.out.find("-1 2 0") != std::string::npos);

  fs::path unsatf = scratch() / "unsat.cnf";
  spit(unsatf, "p cnf 1 2\n1 0\n-1 0\n");
  run_result u = run("solve-dimacs " + unsatf.string());
  CHECK(u.code == 20);
  CHECK(u.out.find("s UNSATISFIABLE") != std::string::npos);

  run_result piped = run("solve-dimacs - < " + satf.string());
  CHECK(piped.code == 10);
}

TEST_CASE("the subprocess backend drives an external DIMACS solver") {
  std::string solver = std::string(NETLIFT_CLI_PATH) + " solve-dimacs";
  fs::path two = two_gate_path();
  fs::path rep = scratch() / "sub_report.json";

  unsetenv("NETLIFT_DIMACS_SOLVER");
  run_result none = run("attack " + two.string() + " --backend subprocess");
  CHECK(none.code != 0);

  run_result cmd = run("attack " + two.string() + " --backend subprocess --solver-cmd '" +
                       solver + "' --report " + rep.string());
  CHECK(cmd.code == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(rep));
  CHECK(j["status"] == "Recovered");
  CHECK(j["structural_match"] == true);
  CHECK(j["seed_honored"] == false);

  setenv("NETLIFT_DIMACS_SOLVER", solver.c_str(), 1);
  run_result env = run("attack " + two.string() + " --backend subprocess");
  unsetenv("NETLIFT_DIMACS_SOLVER");
  CHECK(env.code == 0);
  CHECK(env.out.find("Recovered") != std::string::npos);
}

TEST_CASE("filter lists feasible driver tuples per gate") {
  run_result table = run("filter " + fixture("probe_demo.net"));
  CHECK(table.code == 0);
  CHECK(table.out.find("feasible driver tuples") != std::string::npos);

  run_result js = run("filter " + fixture("probe_demo.net") + " --json");
  CHECK(js.code == 0);
  nlohmann::json j = nlohmann::json::parse(js.out);
  REQUIRE(j.contains("X"));
  bool has_ab = false;
  for (const auto& t : j["X"]) has_ab = has_ab || t == nlohmann::json::parse(R"(["A","B"])");
  CHECK(has_ab);
}

TEST_CASE("enumerate prints each surviving configuration") {
  fs::path micro = scratch() / "micro.net";
  spit(micro,
       "input a b\noutput y z\ngate g0 tt:0001 a b\ngate g1 tt:0110 g0 a\n"
       "gate g2 tt:0110 g1 a\nconnect y g2\nconnect z g2\n");
  run_result r = run("attack " + micro.string() + " --probe all --no-fault --enumerate 10");
  CHECK(r.code == 0);
  CHECK(r.out.find("survivors: ") != std::string::npos);
  CHECK(r.out.find("# survivor 1") != std::string::npos);
}

TEST_CASE("bench sweeps the four probe and fault conditions") {
  fs::path two = two_gate_path();
  fs::path json_path = scratch() / "bench.json";
  run_result r = run("bench " + two.string() + " --timeout 60 --json " + json_path.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("two.net") != std::string::npos);
  nlohmann::json j = nlohmann::json::parse(slurp(json_path));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 4);
  for (const auto& cell : j) {
    CHECK(cell["circuit"] == "two.net");
    CHECK(cell.contains("probe"));
    CHECK(cell.contains("fault"));
    CHECK(cell["report"]["status"] == "Recovered");
  }
}

TEST_CASE("bad invocations fail without touching the oracle") {
  CHECK(run("attack /nonexistent.net").code == 1);
  CHECK(run("attack /nonexistent.net").err.find("error:") != std::string::npos);
  CHECK(run("").code != 0);
  CHECK(run("attack " + fixture("c17.net") + " --probe sometimes").code != 0);
  CHECK(run("simulate " + fixture("c17.net")).code != 0);
  CHECK(run("attack " + fixture("c17.net") + " --functions ,").code != 0);
}
