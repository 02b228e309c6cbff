// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>

namespace opforge {

/// Kind of literal an implicant binds at one input position.
enum class Literal : uint8_t { Absent, Positive, Negative };

/// Product term over up to 16 inputs, stored as (care, value) bit masks:
/// position i is bound iff bit i of `care` is set, and then requires input
/// bit i to equal bit i of `value`. care == 0 is the universal implicant
/// (constant 1). Invariant: value is a submask of care.
struct Implicant {
  uint32_t care = 0;
  uint32_t value = 0;

  bool covers(uint32_t minterm) const { return (minterm & care) == value; }
  bool universal() const { return care == 0; }

  Literal literal(uint32_t pos) const {
    const uint32_t bit = 1u << pos;
    if (!(care & bit))
      return Literal::Absent;
    return (value & bit) ? Literal::Positive : Literal::Negative;
  }

  uint32_t num_literals() const { return static_cast<uint32_t>(std::popcount(care)); }

  /// Cube string, msb first: '1' positive, '0' negative, '-' absent.
  std::string to_string(uint32_t width) const {
    std::string s;
    for (uint32_t i = width; i-- > 0;) {
      switch (literal(i)) {
      case Literal::Absent: s += '-'; break;
      case Literal::Positive: s += '1'; break;
      case Literal::Negative: s += '0'; break;
      }
    }
    return s;
  }

  friend bool operator==(const Implicant&, const Implicant&) = default;
  friend auto operator<=>(const Implicant&, const Implicant&) = default;
};

} // namespace opforge
