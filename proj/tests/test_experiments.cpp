// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "opforge/experiments.hpp"

using namespace opforge;

namespace {

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(GOLDEN_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const CellResult& cell_of(const ResultTable& table, Generator algo, uint32_t n, uint32_t t) {
  for (const CellResult& cell : table.cells)
    if (cell.algorithm == algo && cell.n == n && cell.t == t)
      return cell;
  REQUIRE(false);
  static CellResult dummy;
  return dummy;
}

} // namespace

TEST_CASE("equal master seeds produce bit-identical reports") {
  ExperimentConfig config;
  config.n_values = {3};
  config.t_values = {2, 3};
  config.trials = 20;
  config.master_seed = 555;
  const std::string a = render_report(run_table(config), ReportFormat::Csv);
  const std::string b = render_report(run_table(config), ReportFormat::Csv);
  CHECK(a == b);
}

TEST_CASE("fixed-seed small grid matches the golden csv") {
  ExperimentConfig config;
  config.n_values = {3, 4};
  config.t_values = {2, 3};
  config.trials = 5;
  config.master_seed = 2024;
  CHECK(render_report(run_table(config), ReportFormat::Csv) == read_golden("table_small.csv"));
}

TEST_CASE("grid shape: infeasible cells vanish, skip-list cells stay as markers") {
  ExperimentConfig config;
  config.trials = 1;
  config.master_seed = 1;
  config.n_values = {3, 4, 5};
  config.t_values = {2, 3, 5, 10};
  const ResultTable table = run_table(config);
  // (n=3, t=10) is impossible for everyone: 3 algorithms x (3 + 4 + 4) cells
  CHECK(table.cells.size() == 33);
  const CellResult& skipped = cell_of(table, Generator::Rnd, 3, 5);
  CHECK(skipped.skipped);
  CHECK(skipped.successes == 0);
  for (const CellResult& cell : table.cells) {
    CHECK(uint64_t{cell.t} + 1 <= (uint64_t{1} << cell.n));
    if (!cell.skipped)
      CHECK(cell.successes == cell.trials);
  }
}

TEST_CASE("qm rows never use XOR gates") {
  ExperimentConfig config;
  config.n_values = {3, 4};
  config.t_values = {2, 3, 5};
  config.trials = 30;
  config.master_seed = 77;
  const ResultTable table = run_table(config);
  for (const CellResult& cell : table.cells)
    if (cell.algorithm == Generator::Qm)
      CHECK(cell.mean_xor == 0.0);
}

TEST_CASE("paper-claimed trends on a reduced grid") {
  ExperimentConfig config;
  config.trials = 150;
  config.master_seed = 31337;
  const ResultTable table = run_table(config);

  // QM/QMX: mean total gates non-decreasing in t at fixed n
  for (Generator algo : {Generator::Qm, Generator::Qmx}) {
    for (uint32_t n : config.n_values) {
      double previous = -1;
      for (uint32_t t : config.t_values) {
        if (uint64_t{t} + 1 > (uint64_t{1} << n))
          continue;
        const CellResult& cell = cell_of(table, algo, n, t);
        const double total = cell.mean_not + cell.mean_and + cell.mean_or + cell.mean_xor;
        CHECK(total >= previous);
        previous = total;
      }
    }
  }

  // RND: totals move far more with n than with t
  const auto rnd_total = [&](uint32_t n, uint32_t t) {
    const CellResult& cell = cell_of(table, Generator::Rnd, n, t);
    return cell.mean_not + cell.mean_and + cell.mean_or + cell.mean_xor;
  };
  double max_t_spread = 0;
  for (uint32_t n : {4u, 5u}) { // rows with the full t grid present
    double lo = 1e9, hi = -1e9;
    for (uint32_t t : config.t_values) {
      const double v = rnd_total(n, t);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    max_t_spread = std::max(max_t_spread, hi - lo);
  }
  double max_n_spread = 0;
  for (uint32_t t : {2u, 3u}) { // columns where every n is present
    double lo = 1e9, hi = -1e9;
    for (uint32_t n : config.n_values) {
      const double v = rnd_total(n, t);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    max_n_spread = std::max(max_n_spread, hi - lo);
  }
  CHECK(max_t_spread < max_n_spread);
}

TEST_CASE("renderers") {
  SUBCASE("empty table renders header only") {
    const ResultTable empty;
    CHECK(render_report(empty, ReportFormat::Csv) ==
          "algorithm,n,t,mean_not,mean_and,mean_or,mean_xor,stddev_total,trials,skipped\n");
    const std::string md = render_report(empty, ReportFormat::Markdown);
    CHECK(md.find("| algorithm |") != std::string::npos);
  }
  SUBCASE("single skipped cell renders one marker row") {
    ResultTable table;
    CellResult cell;
    cell.algorithm = Generator::Rnd;
    cell.n = 3;
    cell.t = 5;
    cell.skipped = true;
    table.cells.push_back(cell);
    CHECK(render_report(table, ReportFormat::Csv).find("rnd,3,5,,,,,,0,1") !=
          std::string::npos);
    CHECK(render_report(table, ReportFormat::Markdown).find("- | - | - | - | - | 0 | 1") !=
          std::string::npos);
  }
}

TEST_CASE("the rng stream is frozen: reproducibility anchors") {
  // Equal seeds must reproduce equal artifacts on every platform, so the
  // generator output itself is pinned here. If these move, every golden
  // file and seeded experiment in the project silently changes meaning.
  SeededRng rng(0);
  CHECK(rng.next() == 11091344671253066420ULL);
  CHECK(rng.next() == 13793997310169335082ULL);
  SeededRng rng1(1);
  CHECK(rng1.next() == 12966619160104079557ULL);
  SeededRng bounded(42);
  CHECK(bounded.below(1000) == 742);
  CHECK(SeededRng::hash_tag("qm") == 0x08d25707b5734823ULL);
}

TEST_CASE("trial seeds separate cells and trials") {
  CHECK(trial_seed(1, Generator::Qm, 3, 2, 0) != trial_seed(1, Generator::Qm, 3, 2, 1));
  CHECK(trial_seed(1, Generator::Qm, 3, 2, 0) != trial_seed(1, Generator::Qmx, 3, 2, 0));
  CHECK(trial_seed(1, Generator::Qm, 3, 2, 0) != trial_seed(2, Generator::Qm, 3, 2, 0));
  CHECK(trial_seed(1, Generator::Qm, 3, 2, 0) == trial_seed(1, Generator::Qm, 3, 2, 0));
}

TEST_CASE("configuration validation") {
  ExperimentConfig config;
  config.trials = 0;
  CHECK_THROWS_AS(run_table(config), std::invalid_argument);
}
