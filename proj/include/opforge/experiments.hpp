// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opforge/generators.hpp"

namespace opforge {

struct SkipCell {
  Generator algorithm;
  uint32_t n = 0;
  uint32_t t = 0;

  friend bool operator==(const SkipCell&, const SkipCell&) = default;
};

/// Gate-count comparison grid: every generator runs `trials` times per
/// (n, t) cell. Cells where t+1 distinct states cannot fit the register are
/// left out of the grid entirely; cells on the skip list get an explicit
/// skipped row (some regimes are too slow for randomized search).
struct ExperimentConfig {
  std::vector<uint32_t> n_values{3, 4, 5};
  std::vector<uint32_t> t_values{2, 3, 5, 10};
  uint32_t trials = 1000;
  uint64_t master_seed = 1;
  std::vector<SkipCell> skip{{Generator::Rnd, 3, 5}};
  uint64_t rnd_attempt_budget = 1'000'000;
  uint64_t rnd_trial_timeout_ms = 10'000;
};

struct CellResult {
  Generator algorithm = Generator::Qm;
  uint32_t n = 0;
  uint32_t t = 0;
  bool skipped = false;
  uint32_t trials = 0;
  uint32_t successes = 0;
  double mean_not = 0, mean_and = 0, mean_or = 0, mean_xor = 0;
  double stddev_total = 0;
  double mean_attempts = 0; // randomized generator only; 1.0 for the others
};

struct ResultTable {
  std::vector<CellResult> cells;
};

/// Seed for one trial: every (algorithm, n, t, index) cell is independently
/// reproducible from the master seed.
uint64_t trial_seed(uint64_t master_seed, Generator algorithm, uint32_t n, uint32_t t,
                    uint32_t trial_index);

/// Run the whole grid. Each trial draws its own reset state and generates
/// one predicate; common-term sharing is already part of generation, so the
/// recorded counts are post-sharing. Deterministic in the master seed.
ResultTable run_table(const ExperimentConfig& config);

enum class ReportFormat : uint8_t { Csv, Markdown };

/// One row per (algorithm, n, t). CSV columns: algorithm, n, t, mean_not,
/// mean_and, mean_or, mean_xor, stddev_total, trials, skipped.
std::string render_report(const ResultTable& table, ReportFormat format);

} // namespace opforge
