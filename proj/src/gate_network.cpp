// SPDX-License-Identifier: Apache-2.0
#include "opforge/gate_network.hpp"

#include <stdexcept>

namespace opforge {

void validate_network(const GateNetwork& network) {
  const uint32_t first = network.first_gate_ref();
  for (uint32_t i = 0; i < network.gates.size(); ++i) {
    const Gate& g = network.gates[i];
    const uint32_t self = first + i;
    if (g.a >= self)
      throw std::invalid_argument("gate operand must precede its user");
    if (g.kind == GateKind::Not) {
      if (g.b != 0)
        throw std::invalid_argument("NOT takes exactly one operand");
    } else {
      if (g.b >= self)
        throw std::invalid_argument("gate operand must precede its user");
    }
  }
  for (uint32_t out : network.outputs)
    if (out >= first + network.gates.size())
      throw std::invalid_argument("output ref out of range");
}

GateCounts count_gates(const GateNetwork& network) {
  std::vector<uint8_t> reachable(network.gates.size(), 0);
  std::vector<uint32_t> stack;
  for (uint32_t out : network.outputs)
    if (network.is_gate(out))
      stack.push_back(out);
  while (!stack.empty()) {
    const uint32_t ref = stack.back();
    stack.pop_back();
    const uint32_t idx = network.gate_index(ref);
    if (reachable[idx])
      continue;
    reachable[idx] = 1;
    const Gate& g = network.gates[idx];
    if (network.is_gate(g.a))
      stack.push_back(g.a);
    if (g.kind != GateKind::Not && network.is_gate(g.b))
      stack.push_back(g.b);
  }
  GateCounts counts;
  for (uint32_t i = 0; i < network.gates.size(); ++i) {
    if (!reachable[i])
      continue;
    switch (network.gates[i].kind) {
    case GateKind::Not: ++counts.not_count; break;
    case GateKind::And: ++counts.and_count; break;
    case GateKind::Or: ++counts.or_count; break;
    case GateKind::Xor: ++counts.xor_count; break;
    }
  }
  return counts;
}

uint32_t evaluate(const GateNetwork& network, uint32_t input) {
  if (network.num_leaves < 32 && (input >> network.num_leaves) != 0)
    throw std::invalid_argument("evaluate: input wider than leaf count");

  std::vector<uint8_t> value(network.first_gate_ref() + network.gates.size());
  value[GateNetwork::kConst0] = 0;
  value[GateNetwork::kConst1] = 1;
  for (uint32_t i = 0; i < network.num_leaves; ++i)
    value[network.leaf_ref(i)] = (input >> i) & 1;
  for (uint32_t i = 0; i < network.gates.size(); ++i) {
    const Gate& g = network.gates[i];
    uint8_t v = 0;
    switch (g.kind) {
    case GateKind::Not: v = !value[g.a]; break;
    case GateKind::And: v = value[g.a] & value[g.b]; break;
    case GateKind::Or: v = value[g.a] | value[g.b]; break;
    case GateKind::Xor: v = value[g.a] ^ value[g.b]; break;
    }
    value[network.gate_ref(i)] = v;
  }
  uint32_t result = 0;
  for (uint32_t i = 0; i < network.outputs.size(); ++i)
    result |= static_cast<uint32_t>(value[network.outputs[i]]) << i;
  return result;
}

NetworkBuilder::NetworkBuilder(uint32_t num_leaves) { net_.num_leaves = num_leaves; }

uint32_t NetworkBuilder::leaf(uint32_t index) const {
  if (index >= net_.num_leaves)
    throw std::invalid_argument("leaf index out of range");
  return net_.leaf_ref(index);
}

uint32_t NetworkBuilder::intern(GateKind kind, uint32_t a, uint32_t b) {
  const uint64_t key =
      (uint64_t{static_cast<uint8_t>(kind)} << 60) | (uint64_t{a} << 30) | uint64_t{b};
  auto it = cache_.find(key);
  if (it != cache_.end())
    return it->second;
  net_.gates.push_back({kind, a, b});
  const uint32_t ref = net_.gate_ref(static_cast<uint32_t>(net_.gates.size()) - 1);
  cache_.emplace(key, ref);
  return ref;
}

uint32_t NetworkBuilder::mk_not(uint32_t a) {
  if (a == GateNetwork::kConst0)
    return GateNetwork::kConst1;
  if (a == GateNetwork::kConst1)
    return GateNetwork::kConst0;
  if (net_.is_gate(a)) {
    const Gate& g = net_.gates[net_.gate_index(a)];
    if (g.kind == GateKind::Not)
      return g.a; // double negation
  }
  return intern(GateKind::Not, a, 0);
}

uint32_t NetworkBuilder::mk_gate(GateKind kind, uint32_t a, uint32_t b) {
  if (kind == GateKind::Not)
    return mk_not(a);
  if (a > b)
    std::swap(a, b); // commutative canonical order
  switch (kind) {
  case GateKind::And:
    if (a == GateNetwork::kConst0)
      return GateNetwork::kConst0;
    if (a == GateNetwork::kConst1)
      return b;
    if (a == b)
      return a;
    break;
  case GateKind::Or:
    if (a == GateNetwork::kConst0)
      return b;
    if (a == GateNetwork::kConst1)
      return GateNetwork::kConst1;
    if (a == b)
      return a;
    break;
  case GateKind::Xor:
    if (a == GateNetwork::kConst0)
      return b;
    if (a == GateNetwork::kConst1)
      return mk_not(b);
    if (a == b)
      return GateNetwork::kConst0;
    break;
  default:
    break;
  }
  return intern(kind, a, b);
}

void NetworkBuilder::add_output(uint32_t ref) { net_.outputs.push_back(ref); }

namespace {

uint32_t copy_subtree(const GateNetwork& src, uint32_t ref, NetworkBuilder& builder,
                      std::vector<uint32_t>& memo) {
  if (src.is_const(ref))
    return ref;
  if (src.is_leaf(ref))
    return builder.leaf(src.leaf_index(ref));
  const uint32_t idx = src.gate_index(ref);
  if (memo[idx] != UINT32_MAX)
    return memo[idx];
  const Gate& g = src.gates[idx];
  const uint32_t a = copy_subtree(src, g.a, builder, memo);
  uint32_t out;
  if (g.kind == GateKind::Not) {
    out = builder.mk_not(a);
  } else {
    const uint32_t b = copy_subtree(src, g.b, builder, memo);
    out = builder.mk_gate(g.kind, a, b);
  }
  memo[idx] = out;
  return out;
}

} // namespace

GateNetwork cse(std::span<const GateNetwork> networks) {
  if (networks.empty())
    throw std::invalid_argument("cse: need at least one network");
  const uint32_t leaves = networks.front().num_leaves;
  for (const GateNetwork& net : networks)
    if (net.num_leaves != leaves)
      throw std::invalid_argument("cse: networks must share one leaf set");

  NetworkBuilder builder(leaves);
  for (const GateNetwork& net : networks) {
    std::vector<uint32_t> memo(net.gates.size(), UINT32_MAX);
    for (uint32_t out : net.outputs)
      builder.add_output(copy_subtree(net, out, builder, memo));
  }
  return builder.take();
}

bool same_function(const GateNetwork& lhs, const GateNetwork& rhs) {
  if (lhs.num_leaves != rhs.num_leaves || lhs.outputs.size() != rhs.outputs.size())
    return false;
  if (lhs.num_leaves > 16)
    throw std::invalid_argument("same_function: exhaustive check capped at 16 leaves");
  const uint32_t space = 1u << lhs.num_leaves;
  for (uint32_t x = 0; x < space; ++x)
    if (evaluate(lhs, x) != evaluate(rhs, x))
      return false;
  return true;
}

} // namespace opforge
