// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "opforge/implicant.hpp"

namespace opforge {

/// All prime implicants of the function that is 1 on on_set, free on dc_set
/// and 0 elsewhere, in canonical (care, value) order.
std::vector<Implicant> prime_implicants(const std::vector<uint32_t>& on_set,
                                        const std::vector<uint32_t>& dc_set,
                                        uint32_t num_inputs);

/// Minimum DNF cover of the partial function given by (on_set, dc_set).
///
/// The cover evaluates to 1 on every on-set minterm, to 0 on every minterm
/// outside on_set ∪ dc_set, and is minimal in implicant count among
/// prime-implicant covers. Selection is exact (branch-and-bound over the
/// prime chart with essential/dominance reduction) for num_inputs <= 8 and
/// greedy largest-coverage-first above that; ties always break toward the
/// lowest-indexed prime so results are reproducible.
///
/// Worst-case cost is exponential in num_inputs, which is why the width is
/// capped at 16; callers wanting more need a different tool.
std::vector<Implicant> quine_mccluskey(const std::vector<uint32_t>& on_set,
                                       const std::vector<uint32_t>& dc_set,
                                       uint32_t num_inputs);

} // namespace opforge
