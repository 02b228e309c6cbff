// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "opforge/gate_network.hpp"
#include "opforge/implicant.hpp"

namespace opforge {

/// Realize a DNF cover as a single-output gate network: each k-literal
/// product becomes a left-leaning tree of k-1 AND2 gates (literals in
/// ascending bit order), the m products join through m-1 OR2 gates in cover
/// order, and each negated input uses one shared inverter. An empty cover is
/// constant 0; a universal implicant folds the output to constant 1.
GateNetwork to_gate_network(const std::vector<Implicant>& cover, uint32_t num_inputs);

/// Like to_gate_network, but first rewrites XOR patterns in the cover:
/// pairs of products identical except for two complemented literals merge as
///   c·a·b' + c·a'·b  ->  c·(a xor b)
///   c·a·b  + c·a'·b' ->  c·not(a xor b)
/// greedily (lowest pair first) and repeatedly until no pair matches, so
/// merged XOR factors can merge again (3-input parity ends as two XOR
/// gates). The result is functionally identical to the plain DNF and never
/// uses more gates in total.
GateNetwork xor_rewrite(const std::vector<Implicant>& cover, uint32_t num_inputs);

} // namespace opforge
