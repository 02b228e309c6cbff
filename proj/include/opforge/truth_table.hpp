// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace opforge {

enum class TriValue : uint8_t { Zero, One, DontCare };

/// Complete single-output truth table over num_inputs variables, each entry
/// one of {0, 1, don't-care}. Entry m is the output for input minterm m
/// (bit i of m = value of input i).
class TruthTable {
public:
  TruthTable(uint32_t num_inputs, std::vector<TriValue> entries);

  /// Table that is One on `on_set`, DontCare on `dc_set`, Zero elsewhere.
  /// The two sets must be disjoint subsets of [0, 2^num_inputs).
  static TruthTable from_sets(uint32_t num_inputs, const std::vector<uint32_t>& on_set,
                              const std::vector<uint32_t>& dc_set);

  uint32_t num_inputs() const { return num_inputs_; }
  uint32_t size() const { return 1u << num_inputs_; }
  TriValue at(uint32_t minterm) const { return entries_.at(minterm); }

  std::vector<uint32_t> on_set() const;
  std::vector<uint32_t> dc_set() const;

private:
  uint32_t num_inputs_;
  std::vector<TriValue> entries_;
};

} // namespace opforge
