// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace opforge {

enum class GateKind : uint8_t { Not, And, Or, Xor };

/// One 1- or 2-input gate. Operands are refs (see GateNetwork).
struct Gate {
  GateKind kind;
  uint32_t a = 0;
  uint32_t b = 0; // unused for Not

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Combinational DAG over state-bit leaves.
///
/// Refs encode: 0 = constant 0, 1 = constant 1, 2..2+num_leaves-1 = leaves,
/// everything above = gates in topological order (each gate's operands have
/// strictly smaller refs). Structurally identical subtrees built through
/// NetworkBuilder are shared.
struct GateNetwork {
  uint32_t num_leaves = 0;
  std::vector<Gate> gates;
  std::vector<uint32_t> outputs;

  static constexpr uint32_t kConst0 = 0;
  static constexpr uint32_t kConst1 = 1;

  uint32_t first_gate_ref() const { return 2 + num_leaves; }
  bool is_const(uint32_t ref) const { return ref < 2; }
  bool is_leaf(uint32_t ref) const { return ref >= 2 && ref < first_gate_ref(); }
  bool is_gate(uint32_t ref) const { return ref >= first_gate_ref(); }
  uint32_t leaf_index(uint32_t ref) const { return ref - 2; }
  uint32_t gate_index(uint32_t ref) const { return ref - first_gate_ref(); }
  uint32_t leaf_ref(uint32_t index) const { return 2 + index; }
  uint32_t gate_ref(uint32_t index) const { return first_gate_ref() + index; }
  uint32_t num_outputs() const { return static_cast<uint32_t>(outputs.size()); }
};

/// Throws std::invalid_argument when refs are out of range, operands do not
/// precede their users, or gate arities are wrong.
void validate_network(const GateNetwork& network);

/// Per-kind totals over the gates reachable from the outputs. Leaves and
/// constant roots count as zero.
struct GateCounts {
  uint32_t not_count = 0;
  uint32_t and_count = 0;
  uint32_t or_count = 0;
  uint32_t xor_count = 0;

  uint32_t total() const { return not_count + and_count + or_count + xor_count; }
  friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

GateCounts count_gates(const GateNetwork& network);

/// Evaluate on one input assignment (bit i of `input` = leaf i). Returns the
/// outputs packed the same way. Throws on width mismatch (input bits beyond
/// num_leaves set).
uint32_t evaluate(const GateNetwork& network, uint32_t input);

/// Merge several networks over the same leaf set into one multi-output
/// network, sharing structurally identical subtrees (operands of commutative
/// gates are canonicalized first). Output order is the concatenation of the
/// inputs' output lists.
GateNetwork cse(std::span<const GateNetwork> networks);

/// Exhaustive functional equality; both networks must have 16 or fewer leaves.
bool same_function(const GateNetwork& lhs, const GateNetwork& rhs);

/// Bottom-up constructor enforcing the GateNetwork invariants. Identical
/// (kind, operands) requests return the already-built node; commutative
/// operand order is canonicalized; trivial identities (x&x, x^x, operations
/// against constants, double negation) fold away.
class NetworkBuilder {
public:
  explicit NetworkBuilder(uint32_t num_leaves);

  uint32_t leaf(uint32_t index) const;
  uint32_t constant(bool one) const { return one ? GateNetwork::kConst1 : GateNetwork::kConst0; }
  uint32_t mk_not(uint32_t a);
  uint32_t mk_gate(GateKind kind, uint32_t a, uint32_t b);
  void add_output(uint32_t ref);

  const GateNetwork& network() const { return net_; }
  GateNetwork take() { return std::move(net_); }

private:
  uint32_t intern(GateKind kind, uint32_t a, uint32_t b);

  GateNetwork net_;
  std::unordered_map<uint64_t, uint32_t> cache_;
};

} // namespace opforge
