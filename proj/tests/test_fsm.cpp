// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opforge/generators.hpp"
#include "opforge/rng.hpp"
#include "opforge/transition_system.hpp"

using namespace opforge;

namespace {

TransitionSystem identity_system(uint32_t width, uint32_t reset) {
  NetworkBuilder builder(width);
  for (uint32_t i = 0; i < width; ++i)
    builder.add_output(builder.leaf(i));
  return {width, builder.take(), reset};
}

TransitionSystem oscillator_1bit() {
  NetworkBuilder builder(1);
  builder.add_output(builder.mk_not(builder.leaf(0)));
  return {1, builder.take(), 0};
}

// A random n-output network over n leaves, arbitrary structure.
TransitionSystem random_system(uint32_t width, SeededRng& rng) {
  NetworkBuilder builder(width);
  std::vector<uint32_t> refs;
  for (uint32_t i = 0; i < width; ++i)
    refs.push_back(builder.leaf(i));
  const uint32_t extra = 2 + static_cast<uint32_t>(rng.below(8));
  for (uint32_t i = 0; i < extra; ++i) {
    const uint32_t a = refs[rng.below(refs.size())];
    const uint32_t b = refs[rng.below(refs.size())];
    switch (rng.below(4)) {
    case 0: refs.push_back(builder.mk_not(a)); break;
    case 1: refs.push_back(builder.mk_gate(GateKind::And, a, b)); break;
    case 2: refs.push_back(builder.mk_gate(GateKind::Or, a, b)); break;
    default: refs.push_back(builder.mk_gate(GateKind::Xor, a, b)); break;
    }
  }
  for (uint32_t i = 0; i < width; ++i)
    builder.add_output(refs[rng.below(refs.size())]);
  return {width, builder.take(), static_cast<uint32_t>(rng.below(uint64_t{1} << width))};
}

} // namespace

TEST_CASE("reset dominates the transition logic") {
  SeededRng rng(5);
  const TransitionSystem sys = random_system(4, rng);
  for (uint32_t x = 0; x < 16; ++x)
    CHECK(step(sys, x, true) == sys.reset_state);
}

TEST_CASE("step without reset follows the logic") {
  const TransitionSystem sys = identity_system(3, 0b101);
  for (uint32_t x = 0; x < 8; ++x)
    CHECK(step(sys, x, false) == x);
  CHECK_THROWS_AS(step(sys, 8, false), std::invalid_argument);
}

TEST_CASE("identity settles immediately") {
  const TransitionSystem sys = identity_system(3, 0b011);
  const Trajectory traj = simulate_until_stable(sys);
  CHECK(traj.terminal == TerminalKind::Fixpoint);
  CHECK(traj.stable_state == 0b011);
  CHECK(traj.delay == 0);
  CHECK(stabilization_delay(sys) == 0);
}

TEST_CASE("the one-bit oscillator is a period-2 limit cycle") {
  const TransitionSystem sys = oscillator_1bit();
  const Trajectory traj = simulate_until_stable(sys);
  CHECK(traj.terminal == TerminalKind::LimitCycle);
  CHECK(traj.period == 2);
  CHECK_FALSE(stabilization_delay(sys).has_value());
}

TEST_CASE("default bound never truncates (pigeonhole)") {
  SeededRng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const uint32_t width = 1 + static_cast<uint32_t>(rng.below(4));
    const TransitionSystem sys = random_system(width, rng);
    const Trajectory traj = simulate_until_stable(sys);
    CHECK(traj.terminal != TerminalKind::Truncated);
    // trajectory consistency: consecutive states one application apart
    for (size_t i = 0; i + 1 < traj.states.size(); ++i)
      CHECK(evaluate(sys.logic, traj.states[i]) == traj.states[i + 1]);
    CHECK(traj.states.front() == sys.reset_state);
    if (traj.terminal == TerminalKind::Fixpoint) {
      CHECK(evaluate(sys.logic, traj.stable_state) == traj.stable_state);
      CHECK(traj.states.at(traj.delay) == traj.stable_state);
      // first occurrence: no earlier fixpoint on the path
      for (size_t i = 0; i < traj.delay; ++i)
        CHECK(traj.states[i] != traj.stable_state);
    }
  }
}

TEST_CASE("an explicit small bound may truncate") {
  // 3-bit incrementer: 0,1,2,...,7,0,... pure cycle, never a fixpoint
  NetworkBuilder builder(3);
  const uint32_t b0 = builder.leaf(0), b1 = builder.leaf(1), b2 = builder.leaf(2);
  builder.add_output(builder.mk_not(b0));
  builder.add_output(builder.mk_gate(GateKind::Xor, b1, b0));
  builder.add_output(
      builder.mk_gate(GateKind::Xor, b2, builder.mk_gate(GateKind::And, b0, b1)));
  const TransitionSystem sys{3, builder.take(), 0};
  CHECK(simulate_until_stable(sys, 3).terminal == TerminalKind::Truncated);
  CHECK(simulate_until_stable(sys).terminal == TerminalKind::LimitCycle);
  CHECK(simulate_until_stable(sys).period == 8);
}

TEST_CASE("identical systems yield identical trajectories") {
  SeededRng rng1(99), rng2(99);
  const TransitionSystem a = random_system(4, rng1);
  const TransitionSystem b = random_system(4, rng2);
  const Trajectory ta = simulate_until_stable(a);
  const Trajectory tb = simulate_until_stable(b);
  CHECK(ta.states == tb.states);
  CHECK(ta.terminal == tb.terminal);
}

TEST_CASE("generated predicates fix their stable state under step") {
  SeededRng rng(123);
  const OpaquePredicate pred = qm_generate(4, 0b0110, 3, rng);
  CHECK(step(pred.system, pred.stable_state, false) == pred.stable_state);
  CHECK(step(pred.system, pred.stable_state, true) == 0b0110);
}

TEST_CASE("system validation catches shape mismatches") {
  NetworkBuilder builder(3);
  builder.add_output(builder.leaf(0)); // only one output for width 3
  TransitionSystem sys{3, builder.take(), 0};
  CHECK_THROWS_AS(validate_system(sys), std::invalid_argument);

  TransitionSystem wide = identity_system(2, 0);
  wide.reset_state = 4; // wider than the register
  CHECK_THROWS_AS(validate_system(wide), std::invalid_argument);
}
