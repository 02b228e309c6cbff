// SPDX-License-Identifier: Apache-2.0
#include "opforge/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "opforge/errors.hpp"

namespace opforge {

uint64_t trial_seed(uint64_t master_seed, Generator algorithm, uint32_t n, uint32_t t,
                    uint32_t trial_index) {
  return SeededRng::derive(master_seed, {SeededRng::hash_tag(generator_name(algorithm)),
                                         uint64_t{n}, uint64_t{t}, uint64_t{trial_index}});
}

namespace {

CellResult run_cell(const ExperimentConfig& config, Generator algorithm, uint32_t n, uint32_t t) {
  CellResult cell;
  cell.algorithm = algorithm;
  cell.n = n;
  cell.t = t;
  cell.trials = config.trials;

  double sum_not = 0, sum_and = 0, sum_or = 0, sum_xor = 0;
  double sum_total = 0, sum_total_sq = 0;
  double sum_attempts = 0;

  for (uint32_t trial = 0; trial < config.trials; ++trial) {
    SeededRng rng(trial_seed(config.master_seed, algorithm, n, t, trial));
    const uint32_t start = static_cast<uint32_t>(rng.below(uint64_t{1} << n));
    GateCounts counts;
    uint64_t attempts = 1;
    try {
      switch (algorithm) {
      case Generator::Qm:
        counts = qm_generate(n, start, t, rng).counts;
        break;
      case Generator::Qmx:
        counts = qmx_generate(n, start, t, rng).counts;
        break;
      case Generator::Rnd: {
        RndStats stats;
        RndOptions options;
        options.attempt_budget = config.rnd_attempt_budget;
        options.time_budget_ms = config.rnd_trial_timeout_ms;
        counts = rnd_generate(n, start, t, rng, options, &stats).counts;
        attempts = stats.attempts;
        break;
      }
      }
    } catch (const budget_exhausted_error&) {
      continue; // counted through successes staying behind trials
    }
    ++cell.successes;
    sum_not += counts.not_count;
    sum_and += counts.and_count;
    sum_or += counts.or_count;
    sum_xor += counts.xor_count;
    sum_total += counts.total();
    sum_total_sq += double(counts.total()) * counts.total();
    sum_attempts += double(attempts);
  }

  if (cell.successes > 0) {
    const double k = cell.successes;
    cell.mean_not = sum_not / k;
    cell.mean_and = sum_and / k;
    cell.mean_or = sum_or / k;
    cell.mean_xor = sum_xor / k;
    cell.mean_attempts = sum_attempts / k;
    if (cell.successes > 1) {
      const double variance =
          (sum_total_sq - sum_total * sum_total / k) / (k - 1);
      cell.stddev_total = variance > 0 ? std::sqrt(variance) : 0.0;
    }
  }
  return cell;
}

std::string format_fixed(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

} // namespace

ResultTable run_table(const ExperimentConfig& config) {
  if (config.trials < 1)
    throw std::invalid_argument("run_table: trials must be at least 1");

  ResultTable table;
  for (Generator algorithm : {Generator::Qm, Generator::Qmx, Generator::Rnd}) {
    for (uint32_t n : config.n_values) {
      if (n < 1 || n > 16)
        throw std::invalid_argument("run_table: register width out of range");
      for (uint32_t t : config.t_values) {
        if (uint64_t{t} + 1 > (uint64_t{1} << n))
          continue; // no algorithm can reach that delay; not part of the grid
        const bool skipped =
            std::find(config.skip.begin(), config.skip.end(), SkipCell{algorithm, n, t}) !=
            config.skip.end();
        if (skipped) {
          CellResult cell;
          cell.algorithm = algorithm;
          cell.n = n;
          cell.t = t;
          cell.skipped = true;
          table.cells.push_back(cell);
          continue;
        }
        table.cells.push_back(run_cell(config, algorithm, n, t));
      }
    }
  }
  return table;
}

std::string render_report(const ResultTable& table, ReportFormat format) {
  std::ostringstream out;
  const char* columns[] = {"algorithm", "n",        "t",      "mean_not",
                           "mean_and",  "mean_or",  "mean_xor", "stddev_total",
                           "trials",    "skipped"};
  if (format == ReportFormat::Csv) {
    for (size_t i = 0; i < std::size(columns); ++i)
      out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const CellResult& cell : table.cells) {
      out << generator_name(cell.algorithm) << "," << cell.n << "," << cell.t << ",";
      if (cell.skipped) {
        out << ",,,,,0,1\n";
      } else {
        out << format_fixed(cell.mean_not) << "," << format_fixed(cell.mean_and) << ","
            << format_fixed(cell.mean_or) << "," << format_fixed(cell.mean_xor) << ","
            << format_fixed(cell.stddev_total) << "," << cell.successes << ",0\n";
      }
    }
    return out.str();
  }
  if (format == ReportFormat::Markdown) {
    out << "|";
    for (const char* column : columns)
      out << " " << column << " |";
    out << "\n|";
    for (size_t i = 0; i < std::size(columns); ++i)
      out << " --- |";
    out << "\n";
    for (const CellResult& cell : table.cells) {
      out << "| " << generator_name(cell.algorithm) << " | " << cell.n << " | " << cell.t
          << " | ";
      if (cell.skipped) {
        out << "- | - | - | - | - | 0 | 1 |\n";
      } else {
        out << format_fixed(cell.mean_not) << " | " << format_fixed(cell.mean_and) << " | "
            << format_fixed(cell.mean_or) << " | " << format_fixed(cell.mean_xor) << " | "
            << format_fixed(cell.stddev_total) << " | " << cell.successes << " | 0 |\n";
      }
    }
    return out.str();
  }
  throw std::invalid_argument("unknown report format");
}

} // namespace opforge
