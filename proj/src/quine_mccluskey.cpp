// SPDX-License-Identifier: Apache-2.0
#include "opforge/quine_mccluskey.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <stdexcept>

namespace opforge {

namespace {

void validate_sets(const std::vector<uint32_t>& on_set, const std::vector<uint32_t>& dc_set,
                   uint32_t num_inputs) {
  if (num_inputs < 1 || num_inputs > 16)
    throw std::invalid_argument("quine_mccluskey: width must be in [1, 16]");
  const uint32_t space = 1u << num_inputs;
  std::vector<uint8_t> seen(space, 0);
  for (uint32_t m : on_set) {
    if (m >= space)
      throw std::invalid_argument("quine_mccluskey: on-set minterm out of range");
    seen[m] = 1;
  }
  for (uint32_t m : dc_set) {
    if (m >= space)
      throw std::invalid_argument("quine_mccluskey: don't-care minterm out of range");
    if (seen[m])
      throw std::invalid_argument("quine_mccluskey: on-set and don't-care sets overlap");
  }
}

// Branch-and-bound minimum unate cover. `rows[i]` is the set of on-minterm
// column indices prime i covers. Returns selected row indices.
struct CoverSolver {
  const std::vector<std::vector<uint32_t>>& rows;
  uint32_t num_cols;
  std::vector<uint32_t> best;
  bool have_best = false;

  CoverSolver(const std::vector<std::vector<uint32_t>>& rows, uint32_t num_cols)
      : rows(rows), num_cols(num_cols) {}

  void solve(std::vector<uint8_t>& covered, uint32_t covered_count,
             std::vector<uint32_t>& chosen) {
    if (have_best && chosen.size() >= best.size())
      return; // cannot improve
    if (covered_count == num_cols) {
      best = chosen;
      have_best = true;
      return;
    }
    // Branch on the uncovered column with the fewest candidate rows.
    uint32_t branch_col = 0;
    size_t branch_count = SIZE_MAX;
    std::vector<std::vector<uint32_t>> candidates(num_cols);
    for (size_t i = 0; i < rows.size(); ++i)
      for (uint32_t c : rows[i])
        if (!covered[c])
          candidates[c].push_back(static_cast<uint32_t>(i));
    for (uint32_t c = 0; c < num_cols; ++c) {
      if (covered[c])
        continue;
      if (candidates[c].size() < branch_count) {
        branch_count = candidates[c].size();
        branch_col = c;
      }
    }
    if (branch_count == 0 || branch_count == SIZE_MAX)
      return; // uncoverable (cannot happen: primes cover every on-minterm)
    for (uint32_t row : candidates[branch_col]) {
      std::vector<uint8_t> covered2 = covered;
      uint32_t count2 = covered_count;
      for (uint32_t c : rows[row])
        if (!covered2[c]) {
          covered2[c] = 1;
          ++count2;
        }
      chosen.push_back(row);
      solve(covered2, count2, chosen);
      chosen.pop_back();
    }
  }
};

} // namespace

std::vector<Implicant> prime_implicants(const std::vector<uint32_t>& on_set,
                                        const std::vector<uint32_t>& dc_set,
                                        uint32_t num_inputs) {
  validate_sets(on_set, dc_set, num_inputs);
  const uint32_t full_mask = (1u << num_inputs) - 1;

  std::set<Implicant> current;
  for (uint32_t m : on_set)
    current.insert({full_mask, m});
  for (uint32_t m : dc_set)
    current.insert({full_mask, m});

  std::set<Implicant> primes;
  while (!current.empty()) {
    // classic grouping: only terms whose values differ by one set bit can
    // combine, so pair adjacent popcount groups per care mask
    std::map<std::pair<uint32_t, uint32_t>, std::vector<Implicant>> groups;
    for (const Implicant& term : current)
      groups[{term.care, static_cast<uint32_t>(std::popcount(term.value))}].push_back(term);

    std::set<Implicant> next;
    std::set<Implicant> combined;
    for (const auto& [key, terms] : groups) {
      auto above = groups.find({key.first, key.second + 1});
      if (above == groups.end())
        continue;
      for (const Implicant& low : terms) {
        for (const Implicant& high : above->second) {
          const uint32_t diff = low.value ^ high.value;
          if (std::popcount(diff) != 1)
            continue;
          next.insert({low.care & ~diff, low.value & ~diff});
          combined.insert(low);
          combined.insert(high);
        }
      }
    }
    for (const Implicant& term : current)
      if (!combined.count(term))
        primes.insert(term);
    current = std::move(next);
  }
  return {primes.begin(), primes.end()};
}

std::vector<Implicant> quine_mccluskey(const std::vector<uint32_t>& on_set,
                                       const std::vector<uint32_t>& dc_set,
                                       uint32_t num_inputs) {
  validate_sets(on_set, dc_set, num_inputs);
  if (on_set.empty())
    return {}; // constant 0 (don't-cares may fall either way)

  std::vector<Implicant> primes = prime_implicants(on_set, dc_set, num_inputs);

  std::vector<uint32_t> columns(on_set);
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  const uint32_t num_cols = static_cast<uint32_t>(columns.size());

  // Keep only primes that cover at least one on-set minterm.
  std::vector<Implicant> useful;
  std::vector<std::vector<uint32_t>> rows;
  for (const Implicant& p : primes) {
    std::vector<uint32_t> cols;
    for (uint32_t c = 0; c < num_cols; ++c)
      if (p.covers(columns[c]))
        cols.push_back(c);
    if (!cols.empty()) {
      useful.push_back(p);
      rows.push_back(std::move(cols));
    }
  }

  std::vector<uint32_t> selected;
  std::vector<uint8_t> covered(num_cols, 0);
  uint32_t covered_count = 0;

  // Essential primes first: any column with a single candidate row forces it.
  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t c = 0; c < num_cols; ++c) {
      if (covered[c])
        continue;
      uint32_t candidate = UINT32_MAX;
      uint32_t count = 0;
      for (uint32_t i = 0; i < rows.size(); ++i) {
        if (std::find(rows[i].begin(), rows[i].end(), c) != rows[i].end()) {
          candidate = i;
          if (++count > 1)
            break;
        }
      }
      if (count == 1) {
        selected.push_back(candidate);
        for (uint32_t cc : rows[candidate])
          if (!covered[cc]) {
            covered[cc] = 1;
            ++covered_count;
          }
        changed = true;
      }
    }
  }

  if (covered_count < num_cols) {
    if (num_inputs <= 8) {
      CoverSolver solver(rows, num_cols);
      std::vector<uint32_t> chosen;
      solver.solve(covered, covered_count, chosen);
      for (uint32_t row : solver.best)
        selected.push_back(row);
    } else {
      // Greedy largest-coverage-first, lowest index on ties.
      while (covered_count < num_cols) {
        uint32_t best_row = UINT32_MAX;
        uint32_t best_gain = 0;
        for (uint32_t i = 0; i < rows.size(); ++i) {
          uint32_t gain = 0;
          for (uint32_t c : rows[i])
            if (!covered[c])
              ++gain;
          if (gain > best_gain) {
            best_gain = gain;
            best_row = i;
          }
        }
        selected.push_back(best_row);
        for (uint32_t c : rows[best_row])
          if (!covered[c]) {
            covered[c] = 1;
            ++covered_count;
          }
      }
    }
  }

  std::sort(selected.begin(), selected.end());
  selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
  std::vector<Implicant> cover;
  for (uint32_t row : selected)
    cover.push_back(useful[row]);
  return cover;
}

} // namespace opforge
