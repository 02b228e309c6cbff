// SPDX-License-Identifier: Apache-2.0
#include "opforge/hdl.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "opforge/errors.hpp"
#include "netlist_io.hpp"

namespace opforge {

namespace netlist_io {

uint64_t parse_number(const std::string& token, const std::string& context) {
  if (token.empty())
    throw parse_error("missing number in " + context);
  uint64_t value = 0;
  for (char c : token) {
    if (c < '0' || c > '9')
      throw parse_error("bad number '" + token + "' in " + context);
    value = value * 10 + static_cast<uint64_t>(c - '0');
    if (value > (uint64_t{1} << 48))
      throw parse_error("number out of range in " + context);
  }
  return value;
}

namespace {

std::string ref_token(const GateNetwork& net, uint32_t ref) {
  if (ref == GateNetwork::kConst0)
    return "c0";
  if (ref == GateNetwork::kConst1)
    return "c1";
  if (net.is_leaf(ref))
    return "x" + std::to_string(net.leaf_index(ref));
  return "n" + std::to_string(net.gate_index(ref));
}

uint32_t parse_ref(const GateNetwork& net, const std::string& token, uint32_t max_gate,
                   const std::string& context) {
  if (token == "c0")
    return GateNetwork::kConst0;
  if (token == "c1")
    return GateNetwork::kConst1;
  if (token.size() < 2 || (token[0] != 'x' && token[0] != 'n'))
    throw parse_error("bad ref '" + token + "' in " + context);
  const uint64_t index = parse_number(token.substr(1), context);
  if (token[0] == 'x') {
    if (index >= net.num_leaves)
      throw parse_error("leaf ref out of range in " + context);
    return net.leaf_ref(static_cast<uint32_t>(index));
  }
  if (index >= max_gate)
    throw parse_error("dangling or forward gate ref in " + context);
  return net.gate_ref(static_cast<uint32_t>(index));
}

const char* kind_name(GateKind kind) {
  switch (kind) {
  case GateKind::Not: return "not";
  case GateKind::And: return "and";
  case GateKind::Or: return "or";
  case GateKind::Xor: return "xor";
  }
  return "?";
}

std::string reset_bits(const TransitionSystem& system) {
  std::string bits;
  for (uint32_t i = system.width; i-- > 0;)
    bits += ((system.reset_state >> i) & 1) ? '1' : '0';
  return bits;
}

} // namespace

void emit_predicate_block(std::ostream& out, const TransitionSystem& system,
                          const std::optional<WiringPlan>& wiring) {
  const GateNetwork& net = system.logic;
  out << "width " << system.width << "\n";
  out << "reset " << reset_bits(system) << "\n";
  out << "nodes " << net.gates.size() << "\n";
  for (uint32_t i = 0; i < net.gates.size(); ++i) {
    const Gate& g = net.gates[i];
    out << "node " << i << " " << kind_name(g.kind) << " " << ref_token(net, g.a);
    if (g.kind != GateKind::Not)
      out << " " << ref_token(net, g.b);
    out << "\n";
  }
  out << "outputs " << net.outputs.size() << "\n";
  for (uint32_t i = 0; i < net.outputs.size(); ++i)
    out << "out " << i << " " << ref_token(net, net.outputs[i]) << "\n";
  if (wiring) {
    out << "wiring " << wiring->ff_for_bit.size() << "\n";
    for (uint32_t j = 0; j < wiring->ff_for_bit.size(); ++j) {
      out << "wire " << j << " " << wiring->ff_for_bit[j];
      if (wiring->bit_inverted(j))
        out << " inv";
      out << "\n";
    }
  }
}

std::pair<TransitionSystem, std::optional<WiringPlan>>
parse_predicate_block(LineReader& reader, const std::vector<std::string>& first) {
  if (first.size() != 2 || first[0] != "width")
    throw parse_error("expected width line");
  const uint64_t width = parse_number(first[1], "width");
  if (width < 1 || width > 16)
    throw parse_error("width out of range");

  auto reset_line = reader.require("reset");
  if (reset_line.size() != 2 || reset_line[0] != "reset")
    throw parse_error("expected reset line");
  const std::string& bits = reset_line[1];
  if (bits.size() != width)
    throw parse_error("reset value width mismatch");
  uint32_t reset = 0;
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw parse_error("bad reset value");
    reset = (reset << 1) | static_cast<uint32_t>(c - '0');
  }

  GateNetwork net;
  net.num_leaves = static_cast<uint32_t>(width);

  auto nodes_line = reader.require("nodes");
  if (nodes_line.size() != 2 || nodes_line[0] != "nodes")
    throw parse_error("expected nodes line");
  const uint64_t num_nodes = parse_number(nodes_line[1], "nodes");
  for (uint64_t i = 0; i < num_nodes; ++i) {
    auto line = reader.require("node");
    if (line.size() < 4 || line[0] != "node")
      throw parse_error("expected node line");
    if (parse_number(line[1], "node id") != i)
      throw parse_error("node ids must count up from 0");
    Gate gate{};
    const std::string& kind = line[2];
    if (kind == "not")
      gate.kind = GateKind::Not;
    else if (kind == "and")
      gate.kind = GateKind::And;
    else if (kind == "or")
      gate.kind = GateKind::Or;
    else if (kind == "xor")
      gate.kind = GateKind::Xor;
    else
      throw parse_error("unknown gate kind '" + kind + "'");
    const size_t expected_operands = gate.kind == GateKind::Not ? 1 : 2;
    if (line.size() != 3 + expected_operands)
      throw parse_error("wrong operand count for " + kind);
    gate.a = parse_ref(net, line[3], static_cast<uint32_t>(i), "node operand");
    if (expected_operands == 2)
      gate.b = parse_ref(net, line[4], static_cast<uint32_t>(i), "node operand");
    net.gates.push_back(gate);
  }

  auto outputs_line = reader.require("outputs");
  if (outputs_line.size() != 2 || outputs_line[0] != "outputs")
    throw parse_error("expected outputs line");
  const uint64_t num_outputs = parse_number(outputs_line[1], "outputs");
  if (num_outputs != width)
    throw parse_error("output count must equal width");
  for (uint64_t i = 0; i < num_outputs; ++i) {
    auto line = reader.require("out");
    if (line.size() != 3 || line[0] != "out")
      throw parse_error("expected out line");
    if (parse_number(line[1], "out index") != i)
      throw parse_error("out indices must count up from 0");
    net.outputs.push_back(
        parse_ref(net, line[2], static_cast<uint32_t>(net.gates.size()), "out ref"));
  }

  TransitionSystem system{static_cast<uint32_t>(width), std::move(net), reset};
  validate_system(system);

  std::optional<WiringPlan> wiring;
  auto line = reader.next();
  if (line && line->size() == 2 && (*line)[0] == "wiring") {
    const uint64_t count = parse_number((*line)[1], "wiring");
    if (count == 0)
      throw parse_error("wiring section must name at least one constant bit");
    WiringPlan plan;
    bool any_inverted = false;
    for (uint64_t j = 0; j < count; ++j) {
      auto wire = reader.require("wire");
      const bool inverted = wire.size() == 4 && wire[3] == "inv";
      if ((wire.size() != 3 && !inverted) || wire[0] != "wire")
        throw parse_error("expected wire line");
      if (parse_number(wire[1], "wire index") != j)
        throw parse_error("wire indices must count up from 0");
      const uint64_t ff = parse_number(wire[2], "wire target");
      if (ff >= system.width)
        throw parse_error("wire targets a flip-flop outside the register");
      plan.ff_for_bit.push_back(static_cast<uint32_t>(ff));
      plan.inverted.push_back(inverted ? 1 : 0);
      any_inverted |= inverted;
    }
    if (!any_inverted)
      plan.inverted.clear();
    wiring = std::move(plan);
  } else if (line) {
    reader.push_back(std::move(*line));
  }

  return {std::move(system), std::move(wiring)};
}

} // namespace netlist_io

namespace {

using netlist_io::LineReader;

void check_identifier(const std::string& name) {
  if (name.empty())
    throw std::invalid_argument("empty identifier");
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_')
    throw std::invalid_argument("identifier must start with a letter or underscore");
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      throw std::invalid_argument("identifier contains invalid character");
}

/// Drop gates not reachable from the outputs so emitted instance counts
/// line up with count_gates.
GateNetwork compact(const GateNetwork& net) {
  return cse({&net, 1});
}

std::string net_token(const GateNetwork& net, uint32_t ref) {
  if (ref == GateNetwork::kConst0)
    return "gnd";
  if (ref == GateNetwork::kConst1)
    return "vcc";
  if (net.is_leaf(ref))
    return "q" + std::to_string(net.leaf_index(ref));
  return "w" + std::to_string(net.gate_index(ref));
}

} // namespace

std::string emit_verilog(const OpaquePredicate& predicate,
                         const std::optional<WiringPlan>& wiring,
                         const std::string& module_name) {
  check_identifier(module_name);
  validate_system(predicate.system);
  if (wiring && wiring->ff_for_bit.empty())
    throw std::invalid_argument("wiring plan is empty");
  const TransitionSystem& system = predicate.system;
  const GateNetwork net = compact(system.logic);
  const uint32_t n = system.width;

  bool uses_const[2] = {false, false};
  for (uint32_t out : net.outputs) {
    if (out == GateNetwork::kConst0)
      uses_const[0] = true;
    if (out == GateNetwork::kConst1)
      uses_const[1] = true;
  }
  for (const Gate& g : net.gates) {
    for (uint32_t ref : {g.a, g.kind == GateKind::Not ? g.a : g.b}) {
      if (ref == GateNetwork::kConst0)
        uses_const[0] = true;
      if (ref == GateNetwork::kConst1)
        uses_const[1] = true;
    }
  }

  std::ostringstream out;
  out << "module " << module_name << " (\n";
  out << "  input wire clk,\n";
  out << "  input wire rst,\n";
  if (wiring)
    out << "  output wire [" << wiring->ff_for_bit.size() - 1 << ":0] c\n";
  else
    out << "  output wire [" << n - 1 << ":0] state\n";
  out << ");\n";

  for (uint32_t i = 0; i < n; ++i)
    out << "  wire q" << i << ";\n";
  for (uint32_t i = 0; i < net.gates.size(); ++i)
    out << "  wire w" << i << ";\n";
  if (wiring)
    for (uint32_t j = 0; j < wiring->ff_for_bit.size(); ++j)
      if (wiring->bit_inverted(j))
        out << "  wire v" << j << ";\n";
  if (uses_const[0])
    out << "  supply0 gnd;\n";
  if (uses_const[1])
    out << "  supply1 vcc;\n";

  for (uint32_t i = 0; i < n; ++i) {
    const bool reset_high = (system.reset_state >> i) & 1;
    out << "  dff_r" << (reset_high ? 1 : 0) << " ff" << i << " (.clk(clk), .rst(rst), .d("
        << net_token(net, net.outputs[i]) << "), .q(q" << i << "));\n";
  }
  for (uint32_t i = 0; i < net.gates.size(); ++i) {
    const Gate& g = net.gates[i];
    out << "  " << netlist_io::kind_name(g.kind) << " g" << i << " (w" << i << ", "
        << net_token(net, g.a);
    if (g.kind != GateKind::Not)
      out << ", " << net_token(net, g.b);
    out << ");\n";
  }

  if (wiring) {
    for (uint32_t j = 0; j < wiring->ff_for_bit.size(); ++j) {
      const uint32_t ff = wiring->ff_for_bit[j];
      if (ff >= n)
        throw std::invalid_argument("wiring references a flip-flop outside the register");
      if (wiring->bit_inverted(j)) {
        out << "  not i" << j << " (v" << j << ", q" << ff << ");\n";
        out << "  buf b" << j << " (c[" << j << "], v" << j << ");\n";
      } else {
        out << "  buf b" << j << " (c[" << j << "], q" << ff << ");\n";
      }
    }
  } else {
    for (uint32_t i = 0; i < n; ++i)
      out << "  buf b" << i << " (state[" << i << "], q" << i << ");\n";
  }

  out << "endmodule\n";
  return out.str();
}

std::string emit_netlist_text(const TransitionSystem& system,
                              const std::optional<WiringPlan>& wiring) {
  validate_system(system);
  if (wiring) {
    if (wiring->ff_for_bit.empty())
      throw std::invalid_argument("wiring plan is empty");
    for (uint32_t ff : wiring->ff_for_bit)
      if (ff >= system.width)
        throw std::invalid_argument("wiring references a flip-flop outside the register");
  }
  TransitionSystem compacted{system.width, compact(system.logic), system.reset_state};
  std::ostringstream out;
  out << netlist_io::kHeader << "\n";
  netlist_io::emit_predicate_block(out, compacted, wiring);
  out << "end\n";
  return out.str();
}

void emit_netlist_file(const OpaquePredicate& predicate,
                       const std::optional<WiringPlan>& wiring,
                       const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  file << emit_netlist_text(predicate.system, wiring);
}

ParsedNetlist parse_netlist_text(const std::string& text) {
  LineReader reader(text);
  auto header = reader.require("header");
  if (header.size() != 2 || header[0] != "opforge-netlist")
    throw parse_error("missing netlist header");
  if (header[1] != "v1")
    throw parse_error("unsupported netlist version '" + header[1] + "'");

  auto first = reader.require("width");
  auto [system, wiring] = netlist_io::parse_predicate_block(reader, first);

  auto line = reader.require("end");
  if (line.size() != 1 || line[0] != "end")
    throw parse_error("missing end marker (truncated file?)");
  if (reader.next())
    throw parse_error("trailing content after end marker");

  return {std::move(system), std::move(wiring)};
}

ParsedNetlist parse_netlist_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file)
    throw parse_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_netlist_text(buffer.str());
}

} // namespace opforge
