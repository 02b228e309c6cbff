// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "opforge/gate_network.hpp"
#include "opforge/rng.hpp"
#include "opforge/transition_system.hpp"

namespace opforge {

enum class Generator : uint8_t { Qm, Qmx, Rnd };

std::string_view generator_name(Generator g);

/// State walk of length delay+2: starts at the reset state, visits
/// delay+1 pairwise distinct states, and repeats the final one.
struct StateSequence {
  std::vector<uint32_t> states;

  uint32_t stable_state() const { return states[states.size() - 1]; }
  uint32_t delay() const { return static_cast<uint32_t>(states.size()) - 2; }
};

/// Draw the random state sequence for the sequence-first generators:
/// intermediates are sampled uniformly without replacement from the state
/// space minus the states already used. Throws infeasible_error when
/// delay+1 distinct states do not fit in 2^width.
StateSequence gen_sequence(uint32_t width, uint32_t delay, uint32_t start, SeededRng& rng);

/// A register whose value is designer-known after `delay` cycles from reset:
/// the transition logic drives it from the reset state to the fixpoint
/// `stable_state` and keeps it there.
struct OpaquePredicate {
  TransitionSystem system;
  uint32_t stable_state = 0;
  uint64_t delay = 0;
  Generator generator = Generator::Qm;
  GateCounts counts;
};

/// Sequence-first generation: draws a state sequence, derives each register
/// bit's next-state function by two-level minimization over the sequence
/// (every state off the sequence is a don't-care), and shares common terms
/// across the bits. The result follows the drawn sequence exactly, so the
/// measured delay equals `delay`. With delay_is_minimum the target delay is
/// drawn uniformly from [delay, 2^width - 1] instead.
OpaquePredicate qm_generate(uint32_t width, uint32_t start, uint32_t delay, SeededRng& rng,
                            bool delay_is_minimum = false);

/// Same as qm_generate but rewrites XOR patterns in each minimized cover
/// before building gates. Identical seeds give the same sequence, stable
/// state and delay as qm_generate; only the gate structure differs.
OpaquePredicate qmx_generate(uint32_t width, uint32_t start, uint32_t delay, SeededRng& rng,
                             bool delay_is_minimum = false);

struct RndOptions {
  uint64_t attempt_budget = 1'000'000;
  uint64_t time_budget_ms = 0; // 0 = unlimited
};

struct RndStats {
  uint64_t attempts = 0;
};

/// Function-first generation: draws a random per-bit update (a subset of at
/// least two of the other register bits, an inverter stage over a random
/// subset of them, and one combining gate kind out of OR/AND/XOR), then
/// simulates from reset and accepts when the run hits a fixpoint no earlier
/// than min_delay cycles. Redraws otherwise; throws budget_exhausted_error
/// when the attempt or time budget runs out first.
OpaquePredicate rnd_generate(uint32_t width, uint32_t start, uint32_t min_delay, SeededRng& rng,
                             const RndOptions& options = {}, RndStats* stats = nullptr);

} // namespace opforge
