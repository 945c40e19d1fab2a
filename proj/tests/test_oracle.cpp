// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "doctest.h"
#include "netlift/netlist.hpp"
#include "netlift/obslog.hpp"
#include "netlift/oracle.hpp"

using namespace netlift;

namespace {

netlist c17() { return load_netlist(std::string(NETLIFT_FIXTURE_DIR) + "/c17.net"); }

// Independent c17 reference: direct boolean expressions, no shared code with
// the simulator.
std::pair<bool, bool> c17_reference(bool in1, bool in2, bool in3, bool in6, bool in7) {
  auto nand = [](bool a, bool b) { return !(a && b); };
  bool g10 = nand(in1, in3), g11 = nand(in3, in6);
  bool g16 = nand(in2, g11), g19 = nand(g11, in7);
  return {nand(g10, g16), nand(g16, g19)};
}

// Two-gate circuit: g0 = AND(a, b), g1 = XOR(g0, b), y = g1. A stuck-at
// fault on g0 always propagates, so every faulted observation pins g0's
// pre-fault value.
netlist two_gate() {
  return parse_netlist(std::string("input a b\noutput y\n"
                                   "gate g0 tt:0001 a b\n"
                                   "gate g1 tt:0110 g0 b\n"
                                   "connect y g1\n"));
}

}  // namespace

TEST_CASE("simulate matches an independent c17 evaluation on all vectors") {
  netlist n = c17();
  for (unsigned m = 0; m < 32; ++m) {
    std::vector<bool> v = vector_from_index(5, m);
    valuation val = simulate(n, v);
    auto [o22, o23] = c17_reference(v[0], v[1], v[2], v[3], v[4]);
    CHECK(val.value(n.outputs[0]) == o22);
    CHECK(val.value(n.outputs[1]) == o23);
  }
}

TEST_CASE("vector_from_index uses bit i for input i") {
  std::vector<bool> v = vector_from_index(4, 0b1010);
  CHECK(v == std::vector<bool>{false, true, false, true});
}

TEST_CASE("fault semantics on the two-gate circuit") {
  netlist n = two_gate();
  auto out = [&](std::vector<bool> v, std::optional<fault_spec> f) {
    return observe(n, make_query(n, std::move(v), f, all_gate_outputs(n)));
  };

  SUBCASE("stuck-at-1 on a 0-valued node is observably faulty") {
    // fault-free: g0 = 0, y = XOR(0, 0) = 0
    observation_record r = out({true, false}, fault_spec{gate_ref(0), true});
    CHECK(r.outputs == std::vector<bool>{true});
    CHECK(r.probed.at(gate_ref(0)) == true);  // probes read post-fault values
    CHECK(r.probed.at(gate_ref(1)) == true);
  }
  SUBCASE("stuck-at-0 on a 1-valued node is observably faulty") {
    // fault-free: g0 = 1, y = XOR(1, 1) = 0
    observation_record r = out({true, true}, fault_spec{gate_ref(0), false});
    CHECK(r.outputs == std::vector<bool>{true});
    CHECK(r.probed.at(gate_ref(0)) == false);
  }
  SUBCASE("injecting the value the node already carries changes nothing") {
    observation_record masked = out({true, false}, fault_spec{gate_ref(0), false});
    observation_record clean = out({true, false}, std::nullopt);
    CHECK(masked.outputs == clean.outputs);
    for (node_ref g : all_gate_outputs(n)) CHECK(masked.probed.at(g) == clean.probed.at(g));

    observation_record masked2 = out({true, true}, fault_spec{gate_ref(0), true});
    observation_record clean2 = out({true, true}, std::nullopt);
    CHECK(masked2.outputs == clean2.outputs);
  }
  SUBCASE("fault propagates through reconvergent fanout in c17") {
    netlist c = c17();
    // 11111 fault-free: g16 = 1; stuck-at-0 flips both outputs' inputs
    observation_record r =
        observe(c, make_query(c, {true, true, true, true, true}, fault_spec{gate_ref(2), false},
                              all_gate_outputs(c)));
    CHECK(r.probed.at(gate_ref(2)) == false);
    CHECK(r.outputs == std::vector<bool>{true, true});
  }
}

TEST_CASE("make_query validates and canonicalizes") {
  netlist n = two_gate();
  CHECK_THROWS(make_query(n, {true}));                                     // bad width
  CHECK_THROWS(make_query(n, {true, false}, fault_spec{pi_ref(0), true})); // fault on a PI
  CHECK_THROWS(make_query(n, {true, false}, fault_spec{gate_ref(7), true}));
  CHECK_THROWS(make_query(n, {true, false}, std::nullopt, {pi_ref(0)}));   // probe a PI
  query q = make_query(n, {true, false}, std::nullopt,
                       {gate_ref(1), gate_ref(0), gate_ref(1)});
  CHECK(q.probes == std::vector<node_ref>{gate_ref(0), gate_ref(1)});
}

TEST_CASE("replay_consistent detects any tampered record") {
  netlist n = c17();
  std::vector<observation_record> log;
  for (unsigned m = 0; m < 8; ++m) {
    std::optional<fault_spec> f;
    if (m % 2) f = fault_spec{gate_ref(m % 6), m % 4 == 1};
    log.push_back(observe(n, make_query(n, vector_from_index(5, m * 3 + 1), f,
                                        m % 3 ? all_gate_outputs(n) : std::vector<node_ref>{})));
  }
  CHECK(replay_consistent(n, log));

  auto flip_output = log;
  flip_output[2].outputs[0] = !flip_output[2].outputs[0];
  CHECK(!replay_consistent(n, flip_output));

  auto flip_probe = log;
  flip_probe[1].probed[gate_ref(3)] = !flip_probe[1].probed[gate_ref(3)];
  CHECK(!replay_consistent(n, flip_probe));
}

TEST_CASE("observation log round-trips through its text form") {
  netlist n = c17();
  std::vector<observation_record> log;
  log.push_back(observe(n, make_query(n, vector_from_index(5, 9))));
  log.push_back(observe(n, make_query(n, vector_from_index(5, 22), fault_spec{gate_ref(1), true},
                                      all_gate_outputs(n))));
  log.push_back(observe(n, make_query(n, vector_from_index(5, 5), std::nullopt,
                                      {gate_ref(4), gate_ref(0)})));
  std::ostringstream out;
  save_log(n, log, out);
  std::istringstream in(out.str());
  std::vector<observation_record> back = load_log(n, in);
  REQUIRE(back.size() == log.size());
  for (size_t i = 0; i < log.size(); ++i) CHECK(back[i] == log[i]);
}

TEST_CASE("observation log text format") {
  netlist n = two_gate();
  observation_record r =
      observe(n, make_query(n, {true, false}, fault_spec{gate_ref(0), true}, {gate_ref(0)}));
  CHECK(format_record(n, r) == "v=10 f=g0:1 p=g0 o=1 r=g0:1");

  observation_record parsed = parse_record(n, "v=10 f=g0:1 p=g0 o=1 r=g0:1");
  CHECK(parsed == r);

  // comments and blanks are skipped; probes come back sorted
  std::istringstream in("# comment\n\nv=10 p=g1,g0 o=1 r=g1:1,g0:0\n");
  std::vector<observation_record> log = load_log(n, in);
  REQUIRE(log.size() == 1);
  CHECK(log[0].q.probes == std::vector<node_ref>{gate_ref(0), gate_ref(1)});

  CHECK_THROWS(parse_record(n, "v=1 o=1"));                  // bad vector width
  CHECK_THROWS(parse_record(n, "v=10 o=11"));                // bad output width
  CHECK_THROWS(parse_record(n, "v=10 p=g0 o=1"));            // probes without readings
  CHECK_THROWS(parse_record(n, "v=10 o=1 r=g0:1"));          // readings without probes
  CHECK_THROWS(parse_record(n, "v=10 p=g0 o=1 r=g1:1"));     // probe/reading mismatch
  CHECK_THROWS(parse_record(n, "v=10 f=a:1 o=1"));           // fault on a PI
  CHECK_THROWS(parse_record(n, "w=10 o=1"));                 // unknown key
}

TEST_CASE("probes on a faulted gate read the injected value") {
  netlist n = two_gate();
  observation_record r =
      observe(n, make_query(n, {false, false}, fault_spec{gate_ref(0), true},
                            {gate_ref(0), gate_ref(1)}));
  CHECK(r.probed.at(gate_ref(0)) == true);           // post-fault
  CHECK(r.probed.at(gate_ref(1)) == true);           // XOR(1, 0)
  CHECK(r.outputs == std::vector<bool>{true});
}
