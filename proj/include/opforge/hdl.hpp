// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "opforge/generators.hpp"
#include "opforge/state_encoding.hpp"
#include "opforge/transition_system.hpp"

namespace opforge {

/// Structural Verilog for a predicate: gate primitives plus dff_r0/dff_r1
/// flip-flop cells (D flip-flops with synchronous reset to 0/1). No
/// behavioral blocks. Without a wiring plan the module exposes the full
/// state register; with one it exposes the planned constant bits instead.
/// Output is deterministic, LF-terminated ASCII. Throws
/// std::invalid_argument for a malformed module name.
std::string emit_verilog(const OpaquePredicate& predicate,
                         const std::optional<WiringPlan>& wiring,
                         const std::string& module_name);

/// Versioned line-oriented netlist text: width, reset value, one gate per
/// line, output refs, optional wiring section, and an explicit end marker so
/// truncation is detectable. Lossless against parse_netlist_text.
std::string emit_netlist_text(const TransitionSystem& system,
                              const std::optional<WiringPlan>& wiring);

void emit_netlist_file(const OpaquePredicate& predicate,
                       const std::optional<WiringPlan>& wiring,
                       const std::filesystem::path& path);

struct ParsedNetlist {
  TransitionSystem system;
  std::optional<WiringPlan> wiring;
};

/// Rejects malformed, truncated, cyclic or dangling structures with
/// parse_error; unknown versions are reported as such.
ParsedNetlist parse_netlist_text(const std::string& text);
ParsedNetlist parse_netlist_file(const std::filesystem::path& path);

} // namespace opforge
