// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opforge/generators.hpp"
#include "opforge/state_encoding.hpp"

namespace opforge {

/// k-input lookup table. config[m] is the output for input minterm m, where
/// bit i of m is the value on inputs[i].
struct LutCell {
  uint32_t id = 0;
  uint32_t k = 0;
  std::vector<std::string> inputs; // net names, length k
  std::vector<uint8_t> config;     // 2^k bits
};

enum class DriverKind : uint8_t { External, Gnd, Vcc, Buffer, PredicateBit };

struct NetDriver {
  DriverKind kind = DriverKind::External;
  std::string source; // Buffer: the driven-from net
  uint32_t bit = 0;   // PredicateBit: constant bit index
};

/// An opaque predicate instantiated inside the netlist; constant bit j is
/// visible on net "op<j>".
struct PredicateInstance {
  TransitionSystem system;
  WiringPlan wiring;
};

/// Minimal LUT-level netlist: cells, declared net drivers (undeclared nets
/// are external inputs; "GND" and "VCC" are implicit), and at most one
/// embedded opaque predicate.
struct LutNetlist {
  std::vector<LutCell> cells; // ascending id
  std::map<std::string, NetDriver> drivers;
  std::optional<PredicateInstance> predicate;
};

/// Which LUT inputs are tied off per marked cell, plus the payload to hide
/// in the configuration rows those inputs make unreachable.
struct WatermarkSpec {
  std::map<uint32_t, std::vector<uint32_t>> fixed_inputs; // cell id -> input indices
  std::vector<uint8_t> payload;
};

/// W bits available: sum over marked cells of 2^k - 2^(k-|fixed|).
uint64_t watermark_capacity(const LutNetlist& netlist, const WatermarkSpec& spec);

/// Tie the marked inputs to driver_net and overwrite the unreachable
/// configuration rows with the payload (cells in ascending id, rows in
/// ascending minterm order). Reachable rows are untouched, so behavior under
/// operation does not change. The payload must fill the capacity exactly.
LutNetlist embed(const LutNetlist& netlist, const WatermarkSpec& spec,
                 const std::string& driver_net = "GND");

/// Read the watermark back out; inverse of embed for every valid spec.
std::vector<uint8_t> extract(const LutNetlist& netlist, const WatermarkSpec& spec);

/// Same, from a bare configuration dump (verification needs no nets).
std::vector<uint8_t> extract_from_configs(const std::map<uint32_t, std::vector<uint8_t>>& configs,
                                          const WatermarkSpec& spec);

/// The removal attack: every cell with at least one input driven by GND,
/// traced through buffer-only nets. Returns ascending cell ids.
std::vector<uint32_t> gnd_trace_attack(const LutNetlist& netlist);

/// Replace the GND ties on the marked cells with an opaque-predicate output
/// that stabilizes at 0, and install the predicate into the netlist. The
/// extracted watermark is unchanged and gnd_trace_attack no longer flags the
/// marked cells. Throws infeasible_error when no wired constant bit of the
/// predicate stabilizes at 0.
LutNetlist harden(const LutNetlist& netlist, const WatermarkSpec& spec,
                  const OpaquePredicate& predicate, const WiringPlan& wiring);

/// Value a net settles to once the design has been out of reset for the
/// predicate's stabilization delay. Throws for external or LUT-driven nets.
uint8_t stable_net_value(const LutNetlist& netlist, const std::string& net);

/// Cell output column over the rows reachable when the given inputs are
/// pinned to `pinned_value`, in ascending minterm order of the free inputs.
std::vector<uint8_t> reachable_rows(const LutCell& cell, const std::vector<uint32_t>& fixed,
                                    uint8_t pinned_value);

/// CRC-8 (poly 0x07) over a bit string; prepend/check for tamper evidence.
std::vector<uint8_t> crc8_prefix(const std::vector<uint8_t>& payload);
bool crc8_check(const std::vector<uint8_t>& prefixed, std::vector<uint8_t>& payload_out);

// --- file formats (shared grammar with the predicate netlist) ---

std::string emit_lut_netlist_text(const LutNetlist& netlist);
void emit_lut_netlist_file(const LutNetlist& netlist, const std::filesystem::path& path);
LutNetlist parse_lut_netlist_text(const std::string& text);
LutNetlist parse_lut_netlist_file(const std::filesystem::path& path);

std::string emit_watermark_spec_text(const WatermarkSpec& spec);
void emit_watermark_spec_file(const WatermarkSpec& spec, const std::filesystem::path& path);
WatermarkSpec parse_watermark_spec_text(const std::string& text);
WatermarkSpec parse_watermark_spec_file(const std::filesystem::path& path);

} // namespace opforge
