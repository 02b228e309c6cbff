// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "opforge/errors.hpp"
#include "opforge/generators.hpp"
#include "opforge/hdl.hpp"
#include "test_support.hpp"

using namespace opforge;

namespace {

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(GOLDEN_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

OpaquePredicate fixed_predicate() {
  SeededRng rng(42);
  return qm_generate(3, 1, 2, rng);
}

} // namespace

TEST_CASE("emitted verilog matches the golden module byte for byte") {
  const OpaquePredicate pred = fixed_predicate();
  CHECK(emit_verilog(pred, std::nullopt, "pred3") == read_golden("pred3.v"));
}

TEST_CASE("emitted netlist text matches the golden file byte for byte") {
  const OpaquePredicate pred = fixed_predicate();
  const WiringPlan plan{{0, 1, 1, 2, 1, 2, 2}};
  CHECK(emit_netlist_text(pred.system, plan) == read_golden("pred_wired.netlist"));
}

TEST_CASE("identity predicate emits flip-flops and zero gate instances") {
  NetworkBuilder builder(3);
  for (uint32_t i = 0; i < 3; ++i)
    builder.add_output(builder.leaf(i));
  OpaquePredicate pred{{3, builder.take(), 5}, 5, 0, Generator::Qm, {}};
  const std::string text = emit_verilog(pred, std::nullopt, "idle");
  const auto module = test_support::parse_verilog(text);
  CHECK(module.width == 3);
  CHECK(module.reset == 5);
  for (int kind = 0; kind < 4; ++kind)
    CHECK(module.num_gate_instances[kind] == 0);
  for (uint32_t x = 0; x < 8; ++x)
    CHECK(module.eval_next_state(x) == x);
}

TEST_CASE("wired module exposes the planned constant fanout") {
  const OpaquePredicate pred = fixed_predicate();
  const WiringPlan plan{{0, 1, 1, 2, 1, 2, 2}};
  const std::string text = emit_verilog(pred, plan, "pred_wired");
  const auto module = test_support::parse_verilog(text);
  REQUIRE(module.output_nets.size() == 7);
  // outputs follow the plan's flip-flops for every state value
  for (uint32_t x = 0; x < 8; ++x) {
    const uint32_t c = module.eval_outputs(x);
    for (uint32_t j = 0; j < 7; ++j)
      CHECK(((c >> j) & 1) == ((x >> plan.ff_for_bit[j]) & 1));
  }
}

TEST_CASE("verilog re-simulation agrees with evaluate on every state") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    SeededRng rng(seed);
    const OpaquePredicate pred =
        seed % 2 ? qmx_generate(4, 2, 4, rng) : qm_generate(4, 2, 4, rng);
    const std::string text = emit_verilog(pred, std::nullopt, "dut");
    const auto module = test_support::parse_verilog(text);
    CHECK(module.reset == 2);
    for (uint32_t x = 0; x < 16; ++x)
      CHECK(module.eval_next_state(x) == evaluate(pred.system.logic, x));
    // emitted gate instances equal the reachable gate census
    CHECK(module.num_gate_instances[0] == pred.counts.not_count);
    CHECK(module.num_gate_instances[1] == pred.counts.and_count);
    CHECK(module.num_gate_instances[2] == pred.counts.or_count);
    CHECK(module.num_gate_instances[3] == pred.counts.xor_count);
  }
}

TEST_CASE("module names must be valid identifiers") {
  const OpaquePredicate pred = fixed_predicate();
  CHECK_THROWS_AS(emit_verilog(pred, std::nullopt, ""), std::invalid_argument);
  CHECK_THROWS_AS(emit_verilog(pred, std::nullopt, "1bad"), std::invalid_argument);
  CHECK_THROWS_AS(emit_verilog(pred, std::nullopt, "has space"), std::invalid_argument);
  CHECK_THROWS_AS(emit_verilog(pred, std::nullopt, "dash-ed"), std::invalid_argument);
}

TEST_CASE("netlist round trip is lossless") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    SeededRng rng(seed);
    const OpaquePredicate pred = rnd_generate(4, 9, 2, rng);
    const std::optional<WiringPlan> wiring =
        seed % 2 ? std::optional<WiringPlan>{WiringPlan{{0, 1, 2}}} : std::nullopt;
    const std::string text = emit_netlist_text(pred.system, wiring);
    const ParsedNetlist parsed = parse_netlist_text(text);
    CHECK(parsed.system.width == pred.system.width);
    CHECK(parsed.system.reset_state == pred.system.reset_state);
    CHECK(parsed.wiring.has_value() == wiring.has_value());
    if (wiring)
      CHECK(parsed.wiring->ff_for_bit == wiring->ff_for_bit);
    // re-emission reproduces the text exactly: node multisets are equal
    CHECK(emit_netlist_text(parsed.system, parsed.wiring) == text);
    CHECK(same_function(parsed.system.logic, pred.system.logic));
  }
}

TEST_CASE("inverted wiring taps survive both emission formats") {
  const OpaquePredicate pred = fixed_predicate();
  WiringPlan plan{{0, 1}, {0, 1}}; // C1 reads ff1 through an inverter

  const std::string netlist = emit_netlist_text(pred.system, plan);
  CHECK(netlist.find("wire 1 1 inv") != std::string::npos);
  const ParsedNetlist parsed = parse_netlist_text(netlist);
  REQUIRE(parsed.wiring.has_value());
  CHECK(parsed.wiring->bit_inverted(1));
  CHECK_FALSE(parsed.wiring->bit_inverted(0));
  CHECK(emit_netlist_text(parsed.system, parsed.wiring) == netlist);

  const auto module = test_support::parse_verilog(emit_verilog(pred, plan, "inv_wired"));
  for (uint32_t x = 0; x < 8; ++x) {
    const uint32_t c = module.eval_outputs(x);
    CHECK((c & 1) == (x & 1));
    CHECK(((c >> 1) & 1) == (((x >> 1) & 1) ^ 1));
  }
}

TEST_CASE("hand-written single-gate netlist parses and evaluates") {
  const std::string text = "opforge-netlist v1\n"
                           "width 1\n"
                           "reset 0\n"
                           "nodes 1\n"
                           "node 0 not x0\n"
                           "outputs 1\n"
                           "out 0 n0\n"
                           "end\n";
  const ParsedNetlist parsed = parse_netlist_text(text);
  CHECK(evaluate(parsed.system.logic, 0) == 1);
  CHECK(evaluate(parsed.system.logic, 1) == 0);
  CHECK(count_gates(parsed.system.logic) == GateCounts{1, 0, 0, 0});
}

TEST_CASE("malformed netlists are rejected") {
  const OpaquePredicate pred = fixed_predicate();
  const std::string good = emit_netlist_text(pred.system, std::nullopt);

  SUBCASE("truncation") {
    const std::string cut = good.substr(0, good.size() / 2);
    CHECK_THROWS_AS(parse_netlist_text(cut), parse_error);
  }
  SUBCASE("missing end marker") {
    std::string no_end = good.substr(0, good.rfind("end"));
    CHECK_THROWS_AS(parse_netlist_text(no_end), parse_error);
  }
  SUBCASE("version mismatch") {
    std::string other = good;
    other.replace(other.find("v1"), 2, "v9");
    CHECK_THROWS_AS(parse_netlist_text(other), parse_error);
  }
  SUBCASE("forward reference") {
    CHECK_THROWS_AS(parse_netlist_text("opforge-netlist v1\n"
                                       "width 1\n"
                                       "reset 0\n"
                                       "nodes 1\n"
                                       "node 0 not n0\n"
                                       "outputs 1\n"
                                       "out 0 n0\n"
                                       "end\n"),
                    parse_error);
  }
  SUBCASE("dangling output") {
    CHECK_THROWS_AS(parse_netlist_text("opforge-netlist v1\n"
                                       "width 1\n"
                                       "reset 0\n"
                                       "nodes 0\n"
                                       "outputs 1\n"
                                       "out 0 n0\n"
                                       "end\n"),
                    parse_error);
  }
  SUBCASE("trailing garbage") {
    CHECK_THROWS_AS(parse_netlist_text(good + "junk\n"), parse_error);
  }
  SUBCASE("empty wiring section") {
    std::string empty_wiring = good.substr(0, good.rfind("end"));
    empty_wiring += "wiring 0\nend\n";
    CHECK_THROWS_AS(parse_netlist_text(empty_wiring), parse_error);
    CHECK_THROWS_AS(emit_netlist_text(pred.system, WiringPlan{}), std::invalid_argument);
    CHECK_THROWS_AS(emit_verilog(pred, WiringPlan{}, "dut"), std::invalid_argument);
  }
}

TEST_CASE("file round trip through the filesystem") {
  const OpaquePredicate pred = fixed_predicate();
  const auto path = std::filesystem::temp_directory_path() / "opforge_hdl_test.netlist";
  emit_netlist_file(pred, std::nullopt, path);
  const ParsedNetlist parsed = parse_netlist_file(path);
  CHECK(same_function(parsed.system.logic, pred.system.logic));
  std::filesystem::remove(path);
}
