// SPDX-License-Identifier: Apache-2.0
#include "opforge/truth_table.hpp"

#include <stdexcept>

namespace opforge {

namespace {

void check_width(uint32_t num_inputs) {
  if (num_inputs < 1 || num_inputs > 16)
    throw std::invalid_argument("truth table width must be in [1, 16]");
}

} // namespace

TruthTable::TruthTable(uint32_t num_inputs, std::vector<TriValue> entries)
    : num_inputs_(num_inputs), entries_(std::move(entries)) {
  check_width(num_inputs);
  if (entries_.size() != (size_t{1} << num_inputs_))
    throw std::invalid_argument("truth table must have exactly 2^n entries");
}

TruthTable TruthTable::from_sets(uint32_t num_inputs, const std::vector<uint32_t>& on_set,
                                 const std::vector<uint32_t>& dc_set) {
  check_width(num_inputs);
  std::vector<TriValue> entries(size_t{1} << num_inputs, TriValue::Zero);
  for (uint32_t m : on_set) {
    if (m >= entries.size())
      throw std::invalid_argument("on-set minterm out of range");
    entries[m] = TriValue::One;
  }
  for (uint32_t m : dc_set) {
    if (m >= entries.size())
      throw std::invalid_argument("don't-care minterm out of range");
    if (entries[m] == TriValue::One)
      throw std::invalid_argument("on-set and don't-care sets overlap");
    entries[m] = TriValue::DontCare;
  }
  return TruthTable(num_inputs, std::move(entries));
}

std::vector<uint32_t> TruthTable::on_set() const {
  std::vector<uint32_t> set;
  for (uint32_t m = 0; m < size(); ++m)
    if (entries_[m] == TriValue::One)
      set.push_back(m);
  return set;
}

std::vector<uint32_t> TruthTable::dc_set() const {
  std::vector<uint32_t> set;
  for (uint32_t m = 0; m < size(); ++m)
    if (entries_[m] == TriValue::DontCare)
      set.push_back(m);
  return set;
}

} // namespace opforge
