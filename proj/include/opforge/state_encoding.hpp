// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opforge/rng.hpp"

namespace opforge {

/// A register bit that holds the same value across every state of the
/// protected subset.
struct FixedPosition {
  uint32_t bit = 0;
  uint8_t value = 0;

  friend bool operator==(const FixedPosition&, const FixedPosition&) = default;
  friend auto operator<=>(const FixedPosition&, const FixedPosition&) = default;
};

/// Injective state-name -> code map together with the positions that stay
/// constant over the protected subset.
struct EncodingAssignment {
  std::map<std::string, uint32_t> codes;
  std::vector<FixedPosition> fixed_positions; // sorted by bit index
};

/// Fanout map: entry j names the flip-flop whose output drives constant
/// bit j. Many constant bits may read the same flip-flop. `inverted` is
/// only populated by the allow-inversion extension; empty means every tap
/// is a plain wire.
struct WiringPlan {
  std::vector<uint32_t> ff_for_bit;
  std::vector<uint8_t> inverted;

  WiringPlan() = default;
  explicit WiringPlan(std::vector<uint32_t> ffs, std::vector<uint8_t> inv = {})
      : ff_for_bit(std::move(ffs)), inverted(std::move(inv)) {}

  bool bit_inverted(size_t j) const { return j < inverted.size() && inverted[j]; }
};

/// Map each constant bit to a fixed position holding its value: the
/// position with the same index when it matches, otherwise the
/// highest-indexed position of that value. Pure fanout, no inverters.
/// With allow_inversion set, a bit whose value no position holds may
/// instead read an inverted position (same selection rule on the
/// complement). Throws infeasible_error when some bit value cannot be
/// produced either way.
WiringPlan plan_wiring(const std::vector<FixedPosition>& fixed_positions,
                       const std::vector<uint8_t>& constant, bool allow_inversion = false);

/// Choose codes so that every state in `subset` agrees on a set of fixed
/// bit positions able to supply all values appearing in `constant`, all
/// codes are injective, and at least one state outside the subset breaks
/// the pattern (so the bits are not globally constant).
///
/// `pinned` optionally fixes codes chosen by the designer; when it covers
/// the whole subset the fixed positions are exactly the positions those
/// codes agree on. Otherwise the solver searches position sets smallest
/// first and draws free codes uniformly from the remaining candidates.
///
/// allow_inversion widens feasibility: a single fixed position can then
/// serve both constant values through an inverter tap, at the price of the
/// extra gates the default mode deliberately avoids.
///
/// constant bit j = constant[j]; width is the register size in bits.
std::pair<EncodingAssignment, WiringPlan>
encode_states(const std::vector<std::string>& state_names, const std::vector<std::string>& subset,
              const std::vector<uint8_t>& constant, uint32_t width, SeededRng& rng,
              const std::map<std::string, uint32_t>& pinned = {}, bool allow_inversion = false);

/// Parse "1101000" (msb of the constant first) into bit-indexed form.
std::vector<uint8_t> parse_bits(const std::string& text);
std::string format_bits(const std::vector<uint8_t>& bits);

} // namespace opforge
