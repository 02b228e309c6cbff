// SPDX-License-Identifier: Apache-2.0
#include "opforge/transition_system.hpp"

#include <stdexcept>
#include <unordered_map>

namespace opforge {

void validate_system(const TransitionSystem& system) {
  if (system.width < 1 || system.width > 16)
    throw std::invalid_argument("transition system width must be in [1, 16]");
  if (system.logic.num_leaves != system.width)
    throw std::invalid_argument("transition logic leaf count must equal width");
  if (system.logic.num_outputs() != system.width)
    throw std::invalid_argument("transition logic output count must equal width");
  if ((system.reset_state >> system.width) != 0)
    throw std::invalid_argument("reset state wider than register");
  validate_network(system.logic);
}

uint32_t step(const TransitionSystem& system, uint32_t state, bool reset) {
  if ((state >> system.width) != 0)
    throw std::invalid_argument("step: state wider than register");
  if (reset)
    return system.reset_state;
  return evaluate(system.logic, state);
}

Trajectory simulate_until_stable(const TransitionSystem& system, uint64_t max_cycles) {
  if (max_cycles == 0)
    max_cycles = uint64_t{1} << system.width;

  Trajectory traj;
  traj.states.push_back(system.reset_state);
  std::unordered_map<uint32_t, uint64_t> first_seen;
  first_seen.emplace(system.reset_state, 0);

  for (uint64_t cycle = 0; cycle < max_cycles; ++cycle) {
    const uint32_t current = traj.states.back();
    const uint32_t next = evaluate(system.logic, current);
    if (next == current) {
      traj.terminal = TerminalKind::Fixpoint;
      traj.stable_state = current;
      traj.delay = traj.states.size() - 1;
      return traj;
    }
    auto it = first_seen.find(next);
    if (it != first_seen.end()) {
      traj.terminal = TerminalKind::LimitCycle;
      traj.period = traj.states.size() - it->second;
      return traj;
    }
    first_seen.emplace(next, traj.states.size());
    traj.states.push_back(next);
  }
  traj.terminal = TerminalKind::Truncated;
  return traj;
}

std::optional<uint64_t> stabilization_delay(const TransitionSystem& system) {
  const Trajectory traj = simulate_until_stable(system);
  if (traj.terminal == TerminalKind::Fixpoint)
    return traj.delay;
  return std::nullopt;
}

} // namespace opforge
