// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "opforge/gate_network.hpp"

namespace opforge {

/// n-bit register with combinational next-state logic and a synchronous
/// reset value. The logic network must have exactly n leaves and n outputs.
struct TransitionSystem {
  uint32_t width = 0;
  GateNetwork logic;
  uint32_t reset_state = 0;
};

/// Throws std::invalid_argument unless logic shape and reset width match.
void validate_system(const TransitionSystem& system);

/// One clock edge: the reset line wins, otherwise the register follows the
/// transition logic.
uint32_t step(const TransitionSystem& system, uint32_t state, bool reset);

enum class TerminalKind : uint8_t { Fixpoint, LimitCycle, Truncated };

/// Iterated run of the transition logic from reset.
///
/// `states` begins at the reset state; consecutive entries are one
/// transition apart. A Fixpoint terminal means the last entry z satisfies
/// f(z) = z and `delay` is its index; a LimitCycle terminal means a previous
/// non-fixpoint state recurred with the given period.
struct Trajectory {
  std::vector<uint32_t> states;
  TerminalKind terminal = TerminalKind::Truncated;
  uint32_t stable_state = 0; // valid for Fixpoint
  uint64_t delay = 0;        // valid for Fixpoint
  uint64_t period = 0;       // valid for LimitCycle
};

/// Simulate from the reset state until a fixpoint or revisited state shows
/// up. max_cycles bounds the number of transitions computed; 0 means 2^width,
/// which by pigeonhole always classifies the run (never Truncated).
Trajectory simulate_until_stable(const TransitionSystem& system, uint64_t max_cycles = 0);

/// Cycles from reset until the fixpoint, or nullopt when the system settles
/// into a limit cycle instead.
std::optional<uint64_t> stabilization_delay(const TransitionSystem& system);

} // namespace opforge
