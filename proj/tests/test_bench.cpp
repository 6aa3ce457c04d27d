#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "spikeflow/bench.hpp"
#include "spikeflow/error.hpp"

using namespace spikeflow;

TEST(Bench, SuiteEdges) {
  EXPECT_EQ(suite_edges(Suite::sparse, 5), 7u);
  EXPECT_EQ(suite_edges(Suite::sparse, 100), 140u);
  EXPECT_EQ(suite_edges(Suite::dense, 40), 780u);
  EXPECT_EQ(default_sizes(Suite::sparse).front(), 5u);
  EXPECT_EQ(default_sizes(Suite::sparse).back(), 100u);
  EXPECT_EQ(default_sizes(Suite::dense).back(), 40u);
  EXPECT_EQ(parse_bench_mode("paper-faithful"), BenchMode::paper);
  EXPECT_THROW(parse_suite("medium"), InputError);
}

TEST(Bench, LeastSquares) {
  const auto exact = least_squares({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_DOUBLE_EQ(exact.slope, 2);
  EXPECT_DOUBLE_EQ(exact.intercept, 1);
  EXPECT_DOUBLE_EQ(exact.r2, 1);
  // x = 0,1,2; y = 0,2,1: slope 0.5, intercept 0.5, r2 = 0.25
  const auto noisy = least_squares({0, 1, 2}, {0, 2, 1});
  EXPECT_NEAR(noisy.slope, 0.5, 1e-12);
  EXPECT_NEAR(noisy.intercept, 0.5, 1e-12);
  EXPECT_NEAR(noisy.r2, 0.25, 1e-12);
  EXPECT_THROW(least_squares({1, 1}, {2, 3}), InputError);
}

TEST(Bench, SmallSparseSweep) {
  BenchConfig cfg;
  cfg.sizes = {5, 10, 20};
  cfg.samples = 2;
  cfg.seed = 5;
  const auto r = run_bench(cfg);
  ASSERT_EQ(r.rows.size(), 6u);
  EXPECT_EQ(r.sizes.size(), 3u);
  EXPECT_EQ(r.spikes_vs_edges.points, 3u);
  EXPECT_TRUE(std::isfinite(r.spikes_vs_edges.slope));
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.error.empty()) << row.error;
    EXPECT_LE(row.max_query_timesteps, 2 * static_cast<std::int64_t>(row.n_edges) + 1);
    EXPECT_EQ(row.invariant_violations, 0u);
    EXPECT_EQ(row.seed, instance_seed(5, row.n_nodes, row.sample));
  }
  std::ostringstream csv;
  write_bench_csv(csv, r.rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), kBenchCsvHeader);
}

TEST(Bench, ThreadsDoNotChangeRows) {
  BenchConfig cfg;
  cfg.suite = Suite::dense;
  cfg.sizes = {6, 9, 12};
  cfg.samples = 3;
  cfg.mode = BenchMode::residual;
  std::ostringstream one, four;
  write_bench_csv(one, run_bench(cfg).rows);
  cfg.threads = 4;
  write_bench_csv(four, run_bench(cfg).rows);
  EXPECT_EQ(one.str(), four.str());
}

TEST(Bench, ResidualMatchesClassical) {
  for (auto suite : {Suite::sparse, Suite::dense}) {
    BenchConfig cfg;
    cfg.suite = suite;
    cfg.sizes = {5, 8, 11, 14};
    cfg.samples = 4;
    cfg.mode = BenchMode::residual;
    const auto r = run_bench(cfg);
    EXPECT_EQ(r.divergences, 0u);
    for (const auto& row : r.rows) EXPECT_EQ(row.value, row.classical_value);
  }
}

TEST(Bench, ClassicalModeHasNoSpikes) {
  BenchConfig cfg;
  cfg.sizes = {6};
  cfg.samples = 2;
  cfg.mode = BenchMode::classical;
  const auto r = run_bench(cfg);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.queries, 0u);
    EXPECT_EQ(row.value, row.classical_value);
    EXPECT_GT(row.classical_time_steps, 0);
  }
  EXPECT_EQ(r.spikes_vs_edges.points, 0u);
}
