// SPDX-License-Identifier: Apache-2.0
#include "opforge/state_encoding.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

#include "opforge/errors.hpp"

namespace opforge {

std::vector<uint8_t> parse_bits(const std::string& text) {
  if (text.empty())
    throw std::invalid_argument("empty bit string");
  std::vector<uint8_t> bits(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[text.size() - 1 - i];
    if (c != '0' && c != '1')
      throw std::invalid_argument("bit string may only contain 0 and 1");
    bits[i] = static_cast<uint8_t>(c - '0');
  }
  return bits;
}

std::string format_bits(const std::vector<uint8_t>& bits) {
  std::string text;
  for (size_t i = bits.size(); i-- > 0;)
    text += bits[i] ? '1' : '0';
  return text;
}

WiringPlan plan_wiring(const std::vector<FixedPosition>& fixed_positions,
                       const std::vector<uint8_t>& constant, bool allow_inversion) {
  if (constant.empty())
    throw std::invalid_argument("plan_wiring: constant must be nonempty");

  bool have[2] = {false, false};
  uint32_t highest[2] = {0, 0};
  std::map<uint32_t, uint8_t> value_at;
  for (const FixedPosition& pos : fixed_positions) {
    value_at[pos.bit] = pos.value;
    if (!have[pos.value] || pos.bit > highest[pos.value]) {
      have[pos.value] = true;
      highest[pos.value] = pos.bit;
    }
  }

  WiringPlan plan;
  plan.ff_for_bit.resize(constant.size());
  bool any_inverted = false;
  std::vector<uint8_t> inverted(constant.size(), 0);
  for (size_t j = 0; j < constant.size(); ++j) {
    const uint8_t b = constant[j];
    if (b > 1)
      throw std::invalid_argument("plan_wiring: constant bits must be 0 or 1");
    auto self = value_at.find(static_cast<uint32_t>(j));
    if (self != value_at.end() && self->second == b) {
      plan.ff_for_bit[j] = static_cast<uint32_t>(j); // index-aligned wire
    } else if (have[b]) {
      plan.ff_for_bit[j] = highest[b];
    } else if (allow_inversion && self != value_at.end() && self->second == (b ^ 1)) {
      plan.ff_for_bit[j] = static_cast<uint32_t>(j);
      inverted[j] = 1;
      any_inverted = true;
    } else if (allow_inversion && have[b ^ 1]) {
      plan.ff_for_bit[j] = highest[b ^ 1];
      inverted[j] = 1;
      any_inverted = true;
    } else {
      throw infeasible_error("plan_wiring: no fixed position holds the required value");
    }
  }
  if (any_inverted)
    plan.inverted = std::move(inverted);
  return plan;
}

namespace {

struct Pattern {
  uint32_t mask = 0;  // fixed positions
  uint32_t value = 0; // their values
};

std::vector<FixedPosition> pattern_positions(const Pattern& p) {
  std::vector<FixedPosition> out;
  for (uint32_t bit = 0; bit < 32; ++bit)
    if ((p.mask >> bit) & 1)
      out.push_back({bit, static_cast<uint8_t>((p.value >> bit) & 1)});
  return out;
}

// Draw `count` distinct codes matching `predicate` from [0, space), uniformly
// without replacement, skipping codes already in `used`.
std::vector<uint32_t> draw_codes(uint32_t space, size_t count, const std::set<uint32_t>& used,
                                 const Pattern& p, bool match_pattern, SeededRng& rng) {
  std::vector<uint32_t> candidates;
  for (uint32_t c = 0; c < space; ++c) {
    if (used.count(c))
      continue;
    const bool matches = (c & p.mask) == p.value;
    if (matches == match_pattern)
      candidates.push_back(c);
  }
  if (candidates.size() < count)
    return {};
  for (size_t i = 0; i < count; ++i) {
    const size_t j = i + static_cast<size_t>(rng.below(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(count);
  return candidates;
}

struct Problem {
  const std::vector<std::string>& names;
  std::set<std::string> subset;
  uint32_t width;
  uint32_t space;
  const std::map<std::string, uint32_t>& pinned;
};

// Try to complete the code assignment for one candidate pattern. Returns
// false when the counts cannot work out; never fails for random reasons.
bool try_assign(const Problem& prob, const Pattern& pattern, SeededRng& rng,
                std::map<std::string, uint32_t>& codes_out) {
  std::set<uint32_t> used;
  for (const auto& [name, code] : prob.pinned)
    used.insert(code);

  std::vector<std::string> free_subset, free_rest;
  bool outside_differs = false;
  bool have_outside = false;
  for (const std::string& name : prob.names) {
    auto pin = prob.pinned.find(name);
    if (prob.subset.count(name)) {
      if (pin == prob.pinned.end())
        free_subset.push_back(name);
    } else {
      have_outside = true;
      if (pin == prob.pinned.end())
        free_rest.push_back(name);
      else if ((pin->second & pattern.mask) != pattern.value)
        outside_differs = true;
    }
  }
  if (!have_outside)
    return false; // the pattern would be globally constant

  std::map<std::string, uint32_t> codes(prob.pinned);

  const std::vector<uint32_t> subset_codes =
      draw_codes(prob.space, free_subset.size(), used, pattern, true, rng);
  if (subset_codes.size() != free_subset.size())
    return false;
  for (size_t i = 0; i < free_subset.size(); ++i) {
    codes[free_subset[i]] = subset_codes[i];
    used.insert(subset_codes[i]);
  }

  size_t rest_index = 0;
  if (!outside_differs) {
    if (free_rest.empty())
      return false;
    const std::vector<uint32_t> differ =
        draw_codes(prob.space, 1, used, pattern, false, rng);
    if (differ.empty())
      return false;
    codes[free_rest[0]] = differ[0];
    used.insert(differ[0]);
    rest_index = 1;
  }

  // Remaining states may take any free code.
  std::vector<uint32_t> pool;
  for (uint32_t c = 0; c < prob.space; ++c)
    if (!used.count(c))
      pool.push_back(c);
  const size_t need = free_rest.size() - rest_index;
  if (pool.size() < need)
    return false;
  for (size_t i = 0; i < need; ++i) {
    const size_t j = i + static_cast<size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    codes[free_rest[rest_index + i]] = pool[i];
  }

  codes_out = std::move(codes);
  return true;
}

} // namespace

std::pair<EncodingAssignment, WiringPlan>
encode_states(const std::vector<std::string>& state_names, const std::vector<std::string>& subset,
              const std::vector<uint8_t>& constant, uint32_t width, SeededRng& rng,
              const std::map<std::string, uint32_t>& pinned, bool allow_inversion) {
  if (width < 1 || width > 16)
    throw std::invalid_argument("encode_states: width must be in [1, 16]");
  if (state_names.empty() || subset.empty() || constant.empty())
    throw std::invalid_argument("encode_states: states, subset and constant must be nonempty");
  const uint32_t space = 1u << width;
  if (state_names.size() > space)
    throw infeasible_error("encode_states: more states than codes");

  std::set<std::string> name_set(state_names.begin(), state_names.end());
  if (name_set.size() != state_names.size())
    throw std::invalid_argument("encode_states: duplicate state names");
  for (const std::string& s : subset)
    if (!name_set.count(s))
      throw std::invalid_argument("encode_states: subset state not declared");
  for (uint8_t b : constant)
    if (b > 1)
      throw std::invalid_argument("encode_states: constant bits must be 0 or 1");

  std::set<uint32_t> pinned_codes;
  for (const auto& [name, code] : pinned) {
    if (!name_set.count(name))
      throw std::invalid_argument("encode_states: pinned state not declared");
    if ((code >> width) != 0)
      throw std::invalid_argument("encode_states: pinned code wider than register");
    if (!pinned_codes.insert(code).second)
      throw std::invalid_argument("encode_states: pinned codes collide");
  }

  Problem prob{state_names, {subset.begin(), subset.end()}, width, space, pinned};

  // Positions still able to be fixed, given any pinned subset codes: the
  // positions where all of them agree.
  uint32_t agree_mask = (1u << width) - 1;
  uint32_t agree_value = 0;
  size_t pinned_subset_count = 0;
  bool first_pin = true;
  for (const std::string& s : subset) {
    auto pin = pinned.find(s);
    if (pin == pinned.end())
      continue;
    ++pinned_subset_count;
    if (first_pin) {
      agree_value = pin->second;
      first_pin = false;
    } else {
      agree_mask &= ~(agree_value ^ pin->second);
      agree_value &= agree_mask;
    }
  }

  bool need_value[2] = {false, false};
  for (uint8_t b : constant)
    need_value[b] = true;
  // with inversion a single position can serve either value
  const uint32_t min_positions =
      allow_inversion ? 1u : (need_value[0] ? 1u : 0u) + (need_value[1] ? 1u : 0u);

  const bool fully_pinned = pinned_subset_count == prob.subset.size();
  std::vector<Pattern> patterns;

  if (fully_pinned) {
    // The encoding of the subset is already decided; every agreeing
    // position is a fixed position.
    if (agree_mask == 0)
      throw infeasible_error("encode_states: pinned subset codes share no constant bit");
    patterns.push_back({agree_mask, agree_value & agree_mask});
  } else {
    std::vector<uint32_t> candidate_bits;
    for (uint32_t bit = 0; bit < width; ++bit)
      if ((agree_mask >> bit) & 1)
        candidate_bits.push_back(bit);
    // Smallest position sets first; within a size, ascending bit
    // combinations; free values in counting order.
    for (size_t p = std::max<size_t>(1, min_positions); p <= candidate_bits.size(); ++p) {
      std::vector<size_t> idx(p);
      for (size_t i = 0; i < p; ++i)
        idx[i] = i;
      for (;;) {
        uint32_t mask = 0;
        for (size_t i = 0; i < p; ++i)
          mask |= 1u << candidate_bits[idx[i]];
        if (pinned_subset_count > 0) {
          patterns.push_back({mask, agree_value & mask});
        } else {
          for (uint32_t v = 0; v < (1u << p); ++v) {
            uint32_t value = 0;
            for (size_t i = 0; i < p; ++i)
              if ((v >> i) & 1)
                value |= 1u << candidate_bits[idx[i]];
            patterns.push_back({mask, value});
          }
        }
        // next combination
        size_t i = p;
        bool exhausted = true;
        while (i-- > 0) {
          if (idx[i] != i + candidate_bits.size() - p) {
            ++idx[i];
            for (size_t k = i + 1; k < p; ++k)
              idx[k] = idx[k - 1] + 1;
            exhausted = false;
            break;
          }
        }
        if (exhausted)
          break;
      }
    }
  }

  for (const Pattern& pattern : patterns) {
    // The pattern must supply every value the constant needs (inverter taps
    // can make up a missing value when the extension is on).
    if (!allow_inversion) {
      bool holds[2] = {false, false};
      for (uint32_t bit = 0; bit < width; ++bit)
        if ((pattern.mask >> bit) & 1)
          holds[(pattern.value >> bit) & 1] = true;
      if ((need_value[0] && !holds[0]) || (need_value[1] && !holds[1]))
        continue;
    }
    const uint32_t free_bits = width - static_cast<uint32_t>(std::popcount(pattern.mask));
    if ((uint64_t{1} << free_bits) < prob.subset.size())
      continue; // not enough codes agreeing on the pattern

    std::map<std::string, uint32_t> codes;
    if (!try_assign(prob, pattern, rng, codes))
      continue;

    EncodingAssignment assignment;
    assignment.codes = std::move(codes);
    assignment.fixed_positions = pattern_positions(pattern);
    WiringPlan plan = plan_wiring(assignment.fixed_positions, constant, allow_inversion);
    return {std::move(assignment), std::move(plan)};
  }

  throw infeasible_error("encode_states: no feasible encoding");
}

} // namespace opforge
