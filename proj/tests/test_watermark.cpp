// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opforge/errors.hpp"
#include "opforge/generators.hpp"
#include "opforge/state_encoding.hpp"
#include "opforge/watermark.hpp"
#include "test_support.hpp"

using namespace opforge;
using test_support::make_wm_fixture;

namespace {

std::vector<uint8_t> random_payload(size_t length, SeededRng& rng) {
  std::vector<uint8_t> bits(length);
  for (auto& b : bits)
    b = static_cast<uint8_t>(rng.below(2));
  return bits;
}

// An opaque predicate stabilizing with at least one 0 bit, plus a wiring
// plan onto that 0 bit.
std::pair<OpaquePredicate, WiringPlan> zero_bit_predicate(uint64_t seed) {
  SeededRng rng(seed);
  for (;;) {
    const OpaquePredicate pred = qm_generate(4, 1, 3, rng);
    for (uint32_t ff = 0; ff < 4; ++ff)
      if (((pred.stable_state >> ff) & 1) == 0)
        return {pred, WiringPlan{{ff}}};
  }
}

} // namespace

TEST_CASE("a 4-input LUT with two tied inputs has 4 live and 12 watermark rows") {
  auto fixture = make_wm_fixture(1);
  fixture.spec.payload.assign(96, 0);
  CHECK(watermark_capacity(fixture.netlist, fixture.spec) == 8 * 12);
  const LutNetlist marked = embed(fixture.netlist, fixture.spec);
  // reachable rows are exactly the four with I3 = I2 = 0
  for (uint32_t id : fixture.marked_ids) {
    for (const LutCell& cell : marked.cells) {
      if (cell.id != id)
        continue;
      CHECK(cell.inputs[3] == "GND");
      CHECK(cell.inputs[2] == "GND");
      CHECK(reachable_rows(cell, {3, 2}, 0).size() == 4);
    }
  }
}

TEST_CASE("embed/extract is the identity on payloads") {
  auto fixture = make_wm_fixture(2);
  SeededRng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    fixture.spec.payload = random_payload(96, rng);
    const LutNetlist marked = embed(fixture.netlist, fixture.spec);
    CHECK(extract(marked, fixture.spec) == fixture.spec.payload);
  }
}

TEST_CASE("extraction works from a bare config dump") {
  auto fixture = make_wm_fixture(3);
  SeededRng rng(5);
  fixture.spec.payload = random_payload(96, rng);
  const LutNetlist marked = embed(fixture.netlist, fixture.spec);
  std::map<uint32_t, std::vector<uint8_t>> dump;
  for (const LutCell& cell : marked.cells)
    dump[cell.id] = cell.config;
  CHECK(extract_from_configs(dump, fixture.spec) == fixture.spec.payload);
}

TEST_CASE("embedding leaves the operating behavior untouched") {
  auto fixture = make_wm_fixture(4);
  SeededRng rng(6);
  fixture.spec.payload = random_payload(96, rng);
  const LutNetlist marked = embed(fixture.netlist, fixture.spec);
  for (uint32_t id : fixture.marked_ids) {
    const LutCell* before = nullptr;
    const LutCell* after = nullptr;
    for (const LutCell& cell : fixture.netlist.cells)
      if (cell.id == id)
        before = &cell;
    for (const LutCell& cell : marked.cells)
      if (cell.id == id)
        after = &cell;
    REQUIRE(before);
    REQUIRE(after);
    CHECK(reachable_rows(*before, {3, 2}, 0) == reachable_rows(*after, {3, 2}, 0));
  }
  // unmarked cells untouched entirely
  for (size_t i = 0; i < marked.cells.size(); ++i)
    if (!fixture.spec.fixed_inputs.count(marked.cells[i].id))
      CHECK(marked.cells[i].config == fixture.netlist.cells[i].config);
}

TEST_CASE("capacity violations and unknown cells are rejected") {
  auto fixture = make_wm_fixture(5);
  fixture.spec.payload.assign(97, 0); // one too many
  CHECK_THROWS_AS(embed(fixture.netlist, fixture.spec), std::invalid_argument);
  fixture.spec.payload.assign(4, 0); // partial payloads are ambiguous
  CHECK_THROWS_AS(embed(fixture.netlist, fixture.spec), std::invalid_argument);

  WatermarkSpec unknown;
  unknown.fixed_inputs[999] = {0};
  CHECK_THROWS_AS(watermark_capacity(fixture.netlist, unknown), std::invalid_argument);
}

TEST_CASE("an empty payload only rewires the marked inputs") {
  auto fixture = make_wm_fixture(55);
  fixture.spec.payload.clear();
  const LutNetlist tied = embed(fixture.netlist, fixture.spec);
  for (size_t i = 0; i < tied.cells.size(); ++i) {
    CHECK(tied.cells[i].config == fixture.netlist.cells[i].config);
    if (fixture.spec.fixed_inputs.count(tied.cells[i].id)) {
      CHECK(tied.cells[i].inputs[3] == "GND");
      CHECK(tied.cells[i].inputs[2] == "GND");
    } else {
      CHECK(tied.cells[i].inputs == fixture.netlist.cells[i].inputs);
    }
  }
}

TEST_CASE("the GND trace attack flags exactly the marked cells") {
  auto fixture = make_wm_fixture(6);
  CHECK(gnd_trace_attack(fixture.netlist).empty()); // nothing tied yet
  SeededRng rng(7);
  fixture.spec.payload = random_payload(96, rng);
  const LutNetlist marked = embed(fixture.netlist, fixture.spec);
  CHECK(gnd_trace_attack(marked) == fixture.marked_ids);
}

TEST_CASE("the attack traces GND through buffer-only nets") {
  LutNetlist netlist;
  LutCell cell;
  cell.id = 0;
  cell.k = 2;
  cell.inputs = {"a", "hidden"};
  cell.config = {0, 1, 1, 0};
  netlist.cells.push_back(cell);
  netlist.drivers["hidden"] = {DriverKind::Buffer, "alias", 0};
  netlist.drivers["alias"] = {DriverKind::Buffer, "GND", 0};
  CHECK(gnd_trace_attack(netlist) == std::vector<uint32_t>{0});

  netlist.drivers["alias"] = {DriverKind::Buffer, "VCC", 0};
  CHECK(gnd_trace_attack(netlist).empty());
}

TEST_CASE("hardening keeps the payload, defeats the attack, preserves function") {
  auto fixture = make_wm_fixture(8);
  SeededRng rng(9);
  fixture.spec.payload = random_payload(96, rng);
  const LutNetlist marked = embed(fixture.netlist, fixture.spec);

  auto [pred, wiring] = zero_bit_predicate(10);
  const LutNetlist hardened = harden(marked, fixture.spec, pred, wiring);

  CHECK(extract(hardened, fixture.spec) == fixture.spec.payload);
  CHECK(gnd_trace_attack(hardened).empty());

  // joint simulation: after the predicate settles, the driven value is 0 and
  // the reachable rows match the original function
  for (uint32_t id : fixture.marked_ids) {
    for (const LutCell& cell : hardened.cells) {
      if (cell.id != id)
        continue;
      const uint8_t driven = stable_net_value(hardened, cell.inputs[3]);
      CHECK(driven == 0);
      const LutCell* original = nullptr;
      for (const LutCell& c : fixture.netlist.cells)
        if (c.id == id)
          original = &c;
      REQUIRE(original);
      CHECK(reachable_rows(cell, {3, 2}, driven) == reachable_rows(*original, {3, 2}, 0));
    }
  }
}

TEST_CASE("hardening requires a 0-valued stable bit") {
  auto fixture = make_wm_fixture(11);
  SeededRng rng(12);
  fixture.spec.payload = random_payload(96, rng);
  const LutNetlist marked = embed(fixture.netlist, fixture.spec);

  // wire deliberately onto 1-valued stable bits only
  SeededRng gen_rng(13);
  for (;;) {
    const OpaquePredicate pred = qm_generate(3, 0, 2, gen_rng);
    std::vector<uint32_t> ones;
    for (uint32_t ff = 0; ff < 3; ++ff)
      if ((pred.stable_state >> ff) & 1)
        ones.push_back(ff);
    if (ones.empty())
      continue;
    CHECK_THROWS_AS(harden(marked, fixture.spec, pred, WiringPlan{{ones[0]}}),
                    infeasible_error);
    break;
  }
}

TEST_CASE("crc prefix detects a wrong extraction spec") {
  auto fixture = make_wm_fixture(14);
  SeededRng rng(15);
  const std::vector<uint8_t> payload = random_payload(88, rng);
  fixture.spec.payload = crc8_prefix(payload);
  REQUIRE(fixture.spec.payload.size() == 96);
  const LutNetlist marked = embed(fixture.netlist, fixture.spec);

  std::vector<uint8_t> out;
  CHECK(crc8_check(extract(marked, fixture.spec), out));
  CHECK(out == payload);

  // shifted spec reads garbage, and the checksum notices
  WatermarkSpec wrong = fixture.spec;
  wrong.fixed_inputs.erase(3);
  wrong.fixed_inputs[4] = {3, 2};
  const std::vector<uint8_t> garbage = extract(marked, wrong);
  std::vector<uint8_t> unused;
  CHECK_FALSE(crc8_check(garbage, unused));
}

TEST_CASE("lut netlist files round trip, with and without a predicate") {
  auto fixture = make_wm_fixture(16);
  SeededRng rng(17);
  fixture.spec.payload = random_payload(96, rng);
  LutNetlist marked = embed(fixture.netlist, fixture.spec);
  marked.drivers["spare"] = {DriverKind::Buffer, "d1", 0};

  const std::string text = emit_lut_netlist_text(marked);
  const LutNetlist parsed = parse_lut_netlist_text(text);
  CHECK(emit_lut_netlist_text(parsed) == text);
  CHECK(parsed.cells.size() == marked.cells.size());
  CHECK(extract(parsed, fixture.spec) == fixture.spec.payload);

  auto [pred, wiring] = zero_bit_predicate(18);
  const LutNetlist hardened = harden(marked, fixture.spec, pred, wiring);
  const std::string hardened_text = emit_lut_netlist_text(hardened);
  const LutNetlist reparsed = parse_lut_netlist_text(hardened_text);
  CHECK(emit_lut_netlist_text(reparsed) == hardened_text);
  REQUIRE(reparsed.predicate.has_value());
  CHECK(same_function(reparsed.predicate->system.logic, pred.system.logic));
  CHECK(gnd_trace_attack(reparsed).empty());
  CHECK(extract(reparsed, fixture.spec) == fixture.spec.payload);
}

TEST_CASE("watermark spec files round trip") {
  auto fixture = make_wm_fixture(19);
  const std::string text = emit_watermark_spec_text(fixture.spec);
  const WatermarkSpec parsed = parse_watermark_spec_text(text);
  CHECK(parsed.fixed_inputs == fixture.spec.fixed_inputs);
  CHECK_THROWS_AS(parse_watermark_spec_text("opforge-wmspec v1\ncell 1 0\n"), parse_error);
}

TEST_CASE("malformed lut netlists are rejected") {
  CHECK_THROWS_AS(parse_lut_netlist_text("opforge-netlist v1\nluts 1\n"), parse_error);
  CHECK_THROWS_AS(parse_lut_netlist_text("opforge-netlist v1\nluts 1\n"
                                         "lut 0 2 a b ff\nend\n"),
                  parse_error); // config too long for k=2
  CHECK_THROWS_AS(parse_lut_netlist_text("not-a-netlist\n"), parse_error);
}
