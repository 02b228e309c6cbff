// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace opforge {

/// Requested construction cannot exist for the given parameters
/// (e.g. a state sequence longer than the state space).
class infeasible_error : public std::runtime_error {
public:
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

/// A randomized search gave up after exhausting its attempt or time budget.
class budget_exhausted_error : public std::runtime_error {
public:
  budget_exhausted_error(const std::string& what, uint64_t attempts)
      : std::runtime_error(what), attempts_(attempts) {}

  uint64_t attempts() const { return attempts_; }

private:
  uint64_t attempts_;
};

/// Malformed, truncated, or unsupported input file.
class parse_error : public std::runtime_error {
public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace opforge
