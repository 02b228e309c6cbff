// SPDX-License-Identifier: Apache-2.0
#include "opforge/watermark.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "opforge/errors.hpp"
#include "netlist_io.hpp"

namespace opforge {

namespace {

constexpr const char* kGndNet = "GND";
constexpr const char* kVccNet = "VCC";

void check_net_name(const std::string& name) {
  if (name.empty())
    throw std::invalid_argument("empty net name");
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_')
    throw std::invalid_argument("net name must start with a letter or underscore");
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      throw std::invalid_argument("net name contains invalid character: " + name);
}

const LutCell& find_cell(const LutNetlist& netlist, uint32_t id) {
  for (const LutCell& cell : netlist.cells)
    if (cell.id == id)
      return cell;
  throw std::invalid_argument("unknown cell id " + std::to_string(id));
}

LutCell& find_cell_mut(LutNetlist& netlist, uint32_t id) {
  for (LutCell& cell : netlist.cells)
    if (cell.id == id)
      return cell;
  throw std::invalid_argument("unknown cell id " + std::to_string(id));
}

void check_cell_shape(const LutCell& cell) {
  if (cell.k < 1 || cell.k > 16 || cell.inputs.size() != cell.k ||
      cell.config.size() != (size_t{1} << cell.k))
    throw std::invalid_argument("malformed lut cell " + std::to_string(cell.id));
}

uint32_t fixed_mask_of(const LutCell& cell, const std::vector<uint32_t>& fixed) {
  check_cell_shape(cell);
  uint32_t mask = 0;
  for (uint32_t index : fixed) {
    if (index >= cell.k)
      throw std::invalid_argument("fixed input index out of range");
    if (mask & (1u << index))
      throw std::invalid_argument("duplicate fixed input index");
    mask |= 1u << index;
  }
  if (mask == 0)
    throw std::invalid_argument("marked cell needs at least one fixed input");
  return mask;
}

std::string predicate_net_name(uint32_t bit) { return "op" + std::to_string(bit); }

} // namespace

uint64_t watermark_capacity(const LutNetlist& netlist, const WatermarkSpec& spec) {
  uint64_t capacity = 0;
  for (const auto& [id, fixed] : spec.fixed_inputs) {
    const LutCell& cell = find_cell(netlist, id);
    const uint32_t f = static_cast<uint32_t>(std::popcount(fixed_mask_of(cell, fixed)));
    capacity += (uint64_t{1} << cell.k) - (uint64_t{1} << (cell.k - f));
  }
  return capacity;
}

LutNetlist embed(const LutNetlist& netlist, const WatermarkSpec& spec,
                 const std::string& driver_net) {
  check_net_name(driver_net);
  const uint64_t capacity = watermark_capacity(netlist, spec);
  // an empty payload only ties the inputs off and leaves every config alone
  const bool write_bits = !spec.payload.empty();
  if (spec.payload.size() > capacity)
    throw std::invalid_argument("payload overflows watermark capacity");
  if (write_bits && spec.payload.size() < capacity)
    throw std::invalid_argument("payload must fill the watermark capacity exactly");

  LutNetlist out = netlist;
  size_t pos = 0;
  for (const auto& [id, fixed] : spec.fixed_inputs) {
    LutCell& cell = find_cell_mut(out, id);
    const uint32_t mask = fixed_mask_of(cell, fixed);
    for (uint32_t index : fixed)
      cell.inputs[index] = driver_net;
    if (!write_bits)
      continue;
    for (uint32_t m = 0; m < (1u << cell.k); ++m)
      if (m & mask)
        cell.config[m] = spec.payload[pos++] ? 1 : 0;
  }
  return out;
}

std::vector<uint8_t> extract(const LutNetlist& netlist, const WatermarkSpec& spec) {
  // go through the dump path so netlist and bitstream verification agree
  std::map<uint32_t, std::vector<uint8_t>> configs;
  for (const auto& [id, fixed] : spec.fixed_inputs)
    configs[id] = find_cell(netlist, id).config;
  return extract_from_configs(configs, spec);
}

std::vector<uint8_t> extract_from_configs(const std::map<uint32_t, std::vector<uint8_t>>& configs,
                                          const WatermarkSpec& spec) {
  std::vector<uint8_t> payload;
  for (const auto& [id, fixed] : spec.fixed_inputs) {
    auto it = configs.find(id);
    if (it == configs.end())
      throw std::invalid_argument("config dump missing cell " + std::to_string(id));
    const std::vector<uint8_t>& config = it->second;
    uint32_t k = 0;
    while ((size_t{1} << k) < config.size())
      ++k;
    if ((size_t{1} << k) != config.size())
      throw std::invalid_argument("config length is not a power of two");
    uint32_t mask = 0;
    for (uint32_t index : fixed) {
      if (index >= k)
        throw std::invalid_argument("fixed input index out of range");
      mask |= 1u << index;
    }
    for (uint32_t m = 0; m < config.size(); ++m)
      if (m & mask)
        payload.push_back(config[m] ? 1 : 0);
  }
  return payload;
}

namespace {

DriverKind resolve_root(const LutNetlist& netlist, const std::string& net,
                        std::string* root_net = nullptr) {
  std::set<std::string> visited;
  std::string current = net;
  for (;;) {
    if (!visited.insert(current).second)
      throw std::invalid_argument("buffer cycle through net " + current);
    if (current == kGndNet)
      return DriverKind::Gnd;
    if (current == kVccNet)
      return DriverKind::Vcc;
    auto it = netlist.drivers.find(current);
    if (it == netlist.drivers.end())
      return DriverKind::External;
    if (it->second.kind == DriverKind::Buffer) {
      current = it->second.source;
      continue;
    }
    if (root_net)
      *root_net = current;
    return it->second.kind;
  }
}

} // namespace

std::vector<uint32_t> gnd_trace_attack(const LutNetlist& netlist) {
  std::vector<uint32_t> suspects;
  for (const LutCell& cell : netlist.cells) {
    bool flagged = false;
    for (const std::string& input : cell.inputs)
      if (resolve_root(netlist, input) == DriverKind::Gnd) {
        flagged = true;
        break;
      }
    if (flagged)
      suspects.push_back(cell.id);
  }
  std::sort(suspects.begin(), suspects.end());
  return suspects;
}

LutNetlist harden(const LutNetlist& netlist, const WatermarkSpec& spec,
                  const OpaquePredicate& predicate, const WiringPlan& wiring) {
  const Trajectory traj = simulate_until_stable(predicate.system);
  if (traj.terminal != TerminalKind::Fixpoint)
    throw infeasible_error("harden: predicate never stabilizes");

  for (uint32_t ff : wiring.ff_for_bit)
    if (ff >= predicate.system.width)
      throw std::invalid_argument("harden: wiring leaves the register");

  uint32_t chosen_bit = UINT32_MAX;
  for (uint32_t j = 0; j < wiring.ff_for_bit.size(); ++j) {
    const uint8_t value = (((traj.stable_state >> wiring.ff_for_bit[j]) & 1) != 0) ^
                          (wiring.bit_inverted(j) ? 1 : 0);
    if (value == 0) {
      chosen_bit = j;
      break;
    }
  }
  if (chosen_bit == UINT32_MAX)
    throw infeasible_error("harden: predicate outputs no 0-valued stable bit");

  LutNetlist out = netlist;
  out.predicate = PredicateInstance{predicate.system, wiring};
  for (uint32_t j = 0; j < wiring.ff_for_bit.size(); ++j)
    out.drivers[predicate_net_name(j)] = {DriverKind::PredicateBit, "", j};

  const std::string target = predicate_net_name(chosen_bit);
  for (const auto& [id, fixed] : spec.fixed_inputs) {
    LutCell& cell = find_cell_mut(out, id);
    fixed_mask_of(cell, fixed); // validates indices
    for (uint32_t index : fixed)
      cell.inputs[index] = target;
  }
  return out;
}

uint8_t stable_net_value(const LutNetlist& netlist, const std::string& net) {
  std::string root;
  switch (resolve_root(netlist, net, &root)) {
  case DriverKind::Gnd:
    return 0;
  case DriverKind::Vcc:
    return 1;
  case DriverKind::PredicateBit: {
    if (!netlist.predicate)
      throw std::invalid_argument("predicate net without an embedded predicate");
    const PredicateInstance& inst = *netlist.predicate;
    const uint32_t bit = netlist.drivers.at(root).bit;
    if (bit >= inst.wiring.ff_for_bit.size())
      throw std::invalid_argument("predicate net bit out of range");
    const Trajectory traj = simulate_until_stable(inst.system);
    if (traj.terminal != TerminalKind::Fixpoint)
      throw std::invalid_argument("embedded predicate never stabilizes");
    const uint8_t raw = (traj.stable_state >> inst.wiring.ff_for_bit[bit]) & 1;
    return raw ^ (inst.wiring.bit_inverted(bit) ? 1 : 0);
  }
  default:
    throw std::invalid_argument("net " + net + " has no stable value");
  }
}

std::vector<uint8_t> reachable_rows(const LutCell& cell, const std::vector<uint32_t>& fixed,
                                    uint8_t pinned_value) {
  const uint32_t mask = fixed_mask_of(cell, fixed);
  const uint32_t pinned_bits = pinned_value ? mask : 0;
  std::vector<uint32_t> free_positions;
  for (uint32_t i = 0; i < cell.k; ++i)
    if (!((mask >> i) & 1))
      free_positions.push_back(i);

  std::vector<uint8_t> rows;
  rows.reserve(size_t{1} << free_positions.size());
  for (uint32_t f = 0; f < (1u << free_positions.size()); ++f) {
    uint32_t m = pinned_bits;
    for (size_t i = 0; i < free_positions.size(); ++i)
      if ((f >> i) & 1)
        m |= 1u << free_positions[i];
    rows.push_back(cell.config[m] ? 1 : 0);
  }
  return rows;
}

std::vector<uint8_t> crc8_prefix(const std::vector<uint8_t>& payload) {
  uint8_t reg = 0;
  for (uint8_t bit : payload) {
    const uint8_t msb = reg >> 7;
    reg = static_cast<uint8_t>((reg << 1) | (bit ? 1 : 0));
    if (msb)
      reg ^= 0x07;
  }
  std::vector<uint8_t> out;
  out.reserve(payload.size() + 8);
  for (int i = 7; i >= 0; --i)
    out.push_back((reg >> i) & 1);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

bool crc8_check(const std::vector<uint8_t>& prefixed, std::vector<uint8_t>& payload_out) {
  if (prefixed.size() < 8)
    return false;
  std::vector<uint8_t> payload(prefixed.begin() + 8, prefixed.end());
  const std::vector<uint8_t> expected = crc8_prefix(payload);
  if (!std::equal(expected.begin(), expected.begin() + 8, prefixed.begin()))
    return false;
  payload_out = std::move(payload);
  return true;
}

// --- file formats ---

namespace {

using netlist_io::LineReader;

std::string config_to_hex(const std::vector<uint8_t>& config) {
  const size_t digits = (config.size() + 3) / 4;
  std::string hex(digits, '0');
  for (size_t m = 0; m < config.size(); ++m) {
    if (!config[m])
      continue;
    const size_t digit = digits - 1 - m / 4;
    const int current = std::isdigit(static_cast<unsigned char>(hex[digit]))
                            ? hex[digit] - '0'
                            : hex[digit] - 'a' + 10;
    const int updated = current | (1 << (m % 4));
    hex[digit] = "0123456789abcdef"[updated];
  }
  return hex;
}

std::vector<uint8_t> hex_to_config(const std::string& hex, uint32_t k) {
  const size_t bits = size_t{1} << k;
  if (hex.size() != (bits + 3) / 4)
    throw parse_error("lut config has wrong length");
  std::vector<uint8_t> config(bits, 0);
  for (size_t m = 0; m < bits; ++m) {
    const char c = hex[hex.size() - 1 - m / 4];
    int value;
    if (c >= '0' && c <= '9')
      value = c - '0';
    else if (c >= 'a' && c <= 'f')
      value = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      value = c - 'A' + 10;
    else
      throw parse_error("bad hex digit in lut config");
    config[m] = (value >> (m % 4)) & 1;
  }
  return config;
}

} // namespace

std::string emit_lut_netlist_text(const LutNetlist& netlist) {
  std::ostringstream out;
  out << netlist_io::kHeader << "\n";
  if (netlist.predicate)
    netlist_io::emit_predicate_block(out, netlist.predicate->system, netlist.predicate->wiring);
  out << "luts " << netlist.cells.size() << "\n";
  for (const LutCell& cell : netlist.cells) {
    if (cell.inputs.size() != cell.k || cell.config.size() != (size_t{1} << cell.k))
      throw std::invalid_argument("malformed lut cell " + std::to_string(cell.id));
    out << "lut " << cell.id << " " << cell.k;
    for (const std::string& input : cell.inputs) {
      check_net_name(input);
      out << " " << input;
    }
    out << " " << config_to_hex(cell.config) << "\n";
  }
  for (const auto& [name, driver] : netlist.drivers) {
    switch (driver.kind) {
    case DriverKind::Buffer:
      out << "net " << name << " buf " << driver.source << "\n";
      break;
    case DriverKind::External:
      out << "net " << name << " ext\n";
      break;
    case DriverKind::PredicateBit:
      break; // implied by the op<j> naming convention
    default:
      throw std::invalid_argument("net " + name + " has an unserializable driver");
    }
  }
  out << "end\n";
  return out.str();
}

void emit_lut_netlist_file(const LutNetlist& netlist, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  file << emit_lut_netlist_text(netlist);
}

LutNetlist parse_lut_netlist_text(const std::string& text) {
  LineReader reader(text);
  auto header = reader.require("header");
  if (header.size() != 2 || header[0] != "opforge-netlist")
    throw parse_error("missing netlist header");
  if (header[1] != "v1")
    throw parse_error("unsupported netlist version '" + header[1] + "'");

  LutNetlist netlist;
  auto line = reader.require("luts or width");
  if (!line.empty() && line[0] == "width") {
    auto [system, wiring] = netlist_io::parse_predicate_block(reader, line);
    if (!wiring)
      throw parse_error("embedded predicate needs a wiring section");
    netlist.predicate = PredicateInstance{std::move(system), std::move(*wiring)};
    for (uint32_t j = 0; j < netlist.predicate->wiring.ff_for_bit.size(); ++j)
      netlist.drivers[predicate_net_name(j)] = {DriverKind::PredicateBit, "", j};
    line = reader.require("luts");
  }

  if (line.size() != 2 || line[0] != "luts")
    throw parse_error("expected luts line");
  const uint64_t num_luts = netlist_io::parse_number(line[1], "luts");
  uint32_t previous_id = 0;
  for (uint64_t i = 0; i < num_luts; ++i) {
    auto lut = reader.require("lut");
    if (lut.size() < 4 || lut[0] != "lut")
      throw parse_error("expected lut line");
    LutCell cell;
    cell.id = static_cast<uint32_t>(netlist_io::parse_number(lut[1], "lut id"));
    if (i > 0 && cell.id <= previous_id)
      throw parse_error("lut ids must be strictly increasing");
    previous_id = cell.id;
    cell.k = static_cast<uint32_t>(netlist_io::parse_number(lut[2], "lut width"));
    if (cell.k < 1 || cell.k > 16)
      throw parse_error("lut width out of range");
    if (lut.size() != size_t{3} + cell.k + 1)
      throw parse_error("lut line has wrong field count");
    for (uint32_t input = 0; input < cell.k; ++input) {
      check_net_name(lut[3 + input]);
      cell.inputs.push_back(lut[3 + input]);
    }
    cell.config = hex_to_config(lut.back(), cell.k);
    netlist.cells.push_back(std::move(cell));
  }

  for (;;) {
    auto next = reader.require("net or end");
    if (next.size() == 1 && next[0] == "end")
      break;
    if (next.size() < 2 || next[0] != "net")
      throw parse_error("expected net or end line");
    check_net_name(next[1]);
    if (next.size() == 3 && next[2] == "ext") {
      netlist.drivers[next[1]] = {DriverKind::External, "", 0};
    } else if (next.size() == 4 && next[2] == "buf") {
      check_net_name(next[3]);
      netlist.drivers[next[1]] = {DriverKind::Buffer, next[3], 0};
    } else {
      throw parse_error("bad net driver for " + next[1]);
    }
  }
  if (reader.next())
    throw parse_error("trailing content after end marker");
  return netlist;
}

LutNetlist parse_lut_netlist_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file)
    throw parse_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_lut_netlist_text(buffer.str());
}

std::string emit_watermark_spec_text(const WatermarkSpec& spec) {
  std::ostringstream out;
  out << "opforge-wmspec v1\n";
  for (const auto& [id, fixed] : spec.fixed_inputs) {
    out << "cell " << id;
    for (uint32_t index : fixed)
      out << " " << index;
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

void emit_watermark_spec_file(const WatermarkSpec& spec, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  file << emit_watermark_spec_text(spec);
}

WatermarkSpec parse_watermark_spec_text(const std::string& text) {
  LineReader reader(text);
  auto header = reader.require("header");
  if (header.size() != 2 || header[0] != "opforge-wmspec" || header[1] != "v1")
    throw parse_error("missing watermark spec header");
  WatermarkSpec spec;
  for (;;) {
    auto line = reader.require("cell or end");
    if (line.size() == 1 && line[0] == "end")
      break;
    if (line.size() < 3 || line[0] != "cell")
      throw parse_error("expected cell or end line");
    const uint32_t id = static_cast<uint32_t>(netlist_io::parse_number(line[1], "cell id"));
    if (spec.fixed_inputs.count(id))
      throw parse_error("duplicate cell in watermark spec");
    std::vector<uint32_t> fixed;
    for (size_t i = 2; i < line.size(); ++i)
      fixed.push_back(static_cast<uint32_t>(netlist_io::parse_number(line[i], "fixed input")));
    spec.fixed_inputs[id] = std::move(fixed);
  }
  if (reader.next())
    throw parse_error("trailing content after end marker");
  return spec;
}

WatermarkSpec parse_watermark_spec_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file)
    throw parse_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_watermark_spec_text(buffer.str());
}

} // namespace opforge
