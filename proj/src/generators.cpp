// SPDX-License-Identifier: Apache-2.0
#include "opforge/generators.hpp"

#include <bit>
#include <chrono>
#include <stdexcept>

#include "opforge/dnf_synth.hpp"
#include "opforge/errors.hpp"
#include "opforge/quine_mccluskey.hpp"

namespace opforge {

namespace {

void check_width(uint32_t width, uint32_t minimum) {
  if (width < minimum || width > 16)
    throw std::invalid_argument("register width out of range");
}

void check_start(uint32_t width, uint32_t start) {
  if ((start >> width) != 0)
    throw std::invalid_argument("start state wider than register");
}

OpaquePredicate sequence_generate(Generator kind, uint32_t width, uint32_t start, uint32_t delay,
                                  SeededRng& rng, bool delay_is_minimum) {
  check_width(width, 1);
  check_start(width, start);
  const uint64_t space = uint64_t{1} << width;
  uint32_t target = delay;
  if (delay_is_minimum) {
    if (delay == 0)
      throw std::invalid_argument("sequence delay must be at least 1");
    if (uint64_t{delay} + 1 > space)
      throw infeasible_error("delay bound does not fit the state space");
    target = delay + static_cast<uint32_t>(rng.below(space - delay));
  }

  const StateSequence seq = gen_sequence(width, target, start, rng);
  const uint32_t t = seq.delay();

  std::vector<uint8_t> on_sequence(space, 0);
  for (uint32_t i = 0; i <= t; ++i)
    on_sequence[seq.states[i]] = 1;
  std::vector<uint32_t> dc_set;
  for (uint32_t x = 0; x < space; ++x)
    if (!on_sequence[x])
      dc_set.push_back(x);

  std::vector<GateNetwork> bit_networks;
  bit_networks.reserve(width);
  for (uint32_t j = 0; j < width; ++j) {
    std::vector<uint32_t> on_set;
    for (uint32_t i = 0; i <= t; ++i)
      if ((seq.states[i + 1] >> j) & 1)
        on_set.push_back(seq.states[i]);
    const std::vector<Implicant> cover = quine_mccluskey(on_set, dc_set, width);
    bit_networks.push_back(kind == Generator::Qmx ? xor_rewrite(cover, width)
                                                  : to_gate_network(cover, width));
  }

  TransitionSystem system{width, cse(bit_networks), start};
  const Trajectory traj = simulate_until_stable(system);
  if (traj.terminal != TerminalKind::Fixpoint || traj.delay != t ||
      traj.stable_state != seq.stable_state())
    throw std::logic_error("sequence generator produced a non-faithful function");

  const GateCounts counts = count_gates(system.logic);
  return {std::move(system), traj.stable_state, traj.delay, kind, counts};
}

/// One RND draw, per register bit: which other bits feed it, which of those
/// are inverted, and the single combining gate kind.
struct RndBitPlan {
  uint32_t member_mask = 0;
  uint32_t negate_mask = 0;
  GateKind kind = GateKind::Or;
};

uint32_t apply_plans(const std::vector<RndBitPlan>& plans, uint32_t x) {
  uint32_t next = 0;
  for (uint32_t j = 0; j < plans.size(); ++j) {
    const RndBitPlan& plan = plans[j];
    const uint32_t inputs = (x ^ plan.negate_mask) & plan.member_mask;
    uint32_t bit = 0;
    switch (plan.kind) {
    case GateKind::Or: bit = inputs != 0; break;
    case GateKind::And: bit = inputs == plan.member_mask; break;
    case GateKind::Xor: bit = std::popcount(inputs) & 1; break;
    case GateKind::Not: break; // unreachable
    }
    next |= bit << j;
  }
  return next;
}

} // namespace

std::string_view generator_name(Generator g) {
  switch (g) {
  case Generator::Qm: return "qm";
  case Generator::Qmx: return "qmx";
  case Generator::Rnd: return "rnd";
  }
  return "?";
}

StateSequence gen_sequence(uint32_t width, uint32_t delay, uint32_t start, SeededRng& rng) {
  check_width(width, 1);
  check_start(width, start);
  if (delay < 1)
    throw std::invalid_argument("sequence delay must be at least 1");
  const uint64_t space = uint64_t{1} << width;
  if (uint64_t{delay} + 1 > space)
    throw infeasible_error("state sequence needs more distinct states than the register holds");

  std::vector<uint32_t> pool;
  pool.reserve(space - 1);
  for (uint32_t x = 0; x < space; ++x)
    if (x != start)
      pool.push_back(x);

  StateSequence seq;
  seq.states.reserve(size_t{delay} + 2);
  seq.states.push_back(start);
  for (uint32_t i = 0; i < delay; ++i) {
    // partial Fisher-Yates: uniform without replacement
    const size_t j = i + static_cast<size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    seq.states.push_back(pool[i]);
  }
  seq.states.push_back(seq.states.back());
  return seq;
}

OpaquePredicate qm_generate(uint32_t width, uint32_t start, uint32_t delay, SeededRng& rng,
                            bool delay_is_minimum) {
  return sequence_generate(Generator::Qm, width, start, delay, rng, delay_is_minimum);
}

OpaquePredicate qmx_generate(uint32_t width, uint32_t start, uint32_t delay, SeededRng& rng,
                             bool delay_is_minimum) {
  return sequence_generate(Generator::Qmx, width, start, delay, rng, delay_is_minimum);
}

OpaquePredicate rnd_generate(uint32_t width, uint32_t start, uint32_t min_delay, SeededRng& rng,
                             const RndOptions& options, RndStats* stats) {
  check_width(width, 3); // each bit needs at least two other flip-flops
  check_start(width, start);
  if (options.attempt_budget < 1)
    throw std::invalid_argument("attempt budget must be at least 1");
  const uint64_t space = uint64_t{1} << width;
  if (uint64_t{min_delay} + 1 > space)
    throw infeasible_error("delay bound does not fit the state space");

  const auto start_time = std::chrono::steady_clock::now();
  std::vector<RndBitPlan> plans(width);
  std::vector<uint8_t> visited(space);

  for (uint64_t attempt = 1; attempt <= options.attempt_budget; ++attempt) {
    if (options.time_budget_ms != 0 && (attempt & 1023) == 0) {
      const auto elapsed = std::chrono::steady_clock::now() - start_time;
      if (std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() >=
          static_cast<int64_t>(options.time_budget_ms)) {
        if (stats)
          stats->attempts = attempt;
        throw budget_exhausted_error("rnd_generate: time budget exhausted", attempt);
      }
    }

    for (uint32_t j = 0; j < width; ++j) {
      const uint32_t others = ((1u << width) - 1) & ~(1u << j);
      uint32_t members;
      do {
        members = static_cast<uint32_t>(rng.below(space)) & others;
      } while (std::popcount(members) < 2);
      plans[j].member_mask = members;
      plans[j].negate_mask = static_cast<uint32_t>(rng.below(space)) & members;
      switch (rng.below(3)) {
      case 0: plans[j].kind = GateKind::Or; break;
      case 1: plans[j].kind = GateKind::And; break;
      default: plans[j].kind = GateKind::Xor; break;
      }
    }

    // Simulate directly on the plans; build gates only for an accepted draw.
    std::fill(visited.begin(), visited.end(), 0);
    uint32_t x = start;
    visited[x] = 1;
    uint64_t delay = 0;
    bool fixpoint = false;
    for (;;) {
      const uint32_t next = apply_plans(plans, x);
      if (next == x) {
        fixpoint = true;
        break;
      }
      if (visited[next])
        break; // limit cycle
      visited[next] = 1;
      x = next;
      ++delay;
    }
    if (!fixpoint || delay < min_delay)
      continue;

    NetworkBuilder builder(width);
    for (uint32_t j = 0; j < width; ++j) {
      const RndBitPlan& plan = plans[j];
      uint32_t acc = 0;
      bool first = true;
      for (uint32_t p = 0; p < width; ++p) {
        if (!((plan.member_mask >> p) & 1))
          continue;
        uint32_t ref = builder.leaf(p);
        if ((plan.negate_mask >> p) & 1)
          ref = builder.mk_not(ref);
        acc = first ? ref : builder.mk_gate(plan.kind, acc, ref);
        first = false;
      }
      builder.add_output(acc);
    }

    TransitionSystem system{width, builder.take(), start};
    const Trajectory traj = simulate_until_stable(system);
    if (traj.terminal != TerminalKind::Fixpoint || traj.delay != delay)
      throw std::logic_error("rnd network disagrees with its plan simulation");
    if (stats)
      stats->attempts = attempt;
    const GateCounts counts = count_gates(system.logic);
    return {std::move(system), traj.stable_state, traj.delay, Generator::Rnd, counts};
  }

  if (stats)
    stats->attempts = options.attempt_budget;
  throw budget_exhausted_error("rnd_generate: attempt budget exhausted", options.attempt_budget);
}

} // namespace opforge
