// SPDX-License-Identifier: Apache-2.0
//
// Line-level plumbing shared by the predicate netlist format and the
// LUT netlist extension. Internal to the library.
#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "opforge/errors.hpp"
#include "opforge/state_encoding.hpp"
#include "opforge/transition_system.hpp"

namespace opforge::netlist_io {

inline constexpr const char* kHeader = "opforge-netlist v1";

/// Tokenized view of the input, one line at a time. Blank lines are skipped;
/// one line of pushback is supported for section peeking.
class LineReader {
public:
  explicit LineReader(const std::string& text) : in_(text) {}

  std::optional<std::vector<std::string>> next() {
    if (pending_) {
      auto line = std::move(*pending_);
      pending_.reset();
      return line;
    }
    std::string line;
    while (std::getline(in_, line)) {
      std::istringstream tokens(line);
      std::vector<std::string> out;
      std::string tok;
      while (tokens >> tok)
        out.push_back(tok);
      if (!out.empty())
        return out;
    }
    return std::nullopt;
  }

  std::vector<std::string> require(const std::string& context) {
    auto line = next();
    if (!line)
      throw parse_error("unexpected end of file while reading " + context);
    return *line;
  }

  void push_back(std::vector<std::string> line) { pending_ = std::move(line); }

private:
  std::istringstream in_;
  std::optional<std::vector<std::string>> pending_;
};

uint64_t parse_number(const std::string& token, const std::string& context);

void emit_predicate_block(std::ostream& out, const TransitionSystem& system,
                          const std::optional<WiringPlan>& wiring);

/// Parses the width/reset/nodes/outputs[/wiring] block including the optional
/// wiring section; the "width" line must already have been consumed and is
/// passed in as `first`.
std::pair<TransitionSystem, std::optional<WiringPlan>>
parse_predicate_block(LineReader& reader, const std::vector<std::string>& first);

} // namespace opforge::netlist_io
