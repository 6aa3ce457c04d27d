#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "spikeflow/flow.hpp"

namespace spikeflow {

enum class Suite : std::uint8_t { sparse, dense };
enum class BenchMode : std::uint8_t { paper, residual, classical };

const char* to_string(Suite s);
const char* to_string(BenchMode m);
Suite parse_suite(const std::string& text);          // throws InputError
BenchMode parse_bench_mode(const std::string& text);  // accepts paper-faithful too

// sparse: floor(1.4 n); dense: n(n-1)/2.
std::size_t suite_edges(Suite s, std::size_t n);
// sparse 5..100, dense 5..40
std::vector<std::size_t> default_sizes(Suite s);

// Seed of one (size, sample) instance, independent of sweep order.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t n, std::size_t sample);

struct BenchConfig {
  Suite suite = Suite::sparse;
  std::vector<std::size_t> sizes;  // empty = default_sizes(suite)
  std::size_t samples = 10;
  std::int64_t c_max = 10;
  std::uint64_t seed = 1;
  BenchMode mode = BenchMode::paper;
  std::size_t threads = 1;

  void validate() const;  // throws InputError
};

struct BenchRow {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  std::size_t sample = 0;
  std::uint64_t seed = 0;
  double mean_spikes = 0;      // per search query
  double mean_timesteps = 0;   // per search query
  double mean_path_length = 0; // over augmenting queries
  std::int64_t shortest_path = 0;  // fewest-edge s-t path of the input graph
  std::size_t queries = 0;
  std::size_t augmentations = 0;
  std::int64_t value = 0;
  std::int64_t classical_value = 0;
  std::int64_t delta = 0;  // classical - spiking
  std::int64_t classical_time_steps = 0;  // (augmentations + 1) * (|V| + |E|)
  std::int64_t controller_time = 0;
  std::size_t wm_peak = 0;
  std::int64_t max_query_timesteps = 0;
  std::int64_t last_query_timesteps = 0;  // the final, path-less query
  std::int64_t max_query_spikes = 0;
  std::int64_t max_neuron_spikes = 0;  // over H and R neurons and queries
  std::size_t invariant_violations = 0;
  std::string error;  // non-empty when the instance failed
};

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  std::size_t points = 0;
};

// Ordinary least squares y = slope * x + intercept. Needs two distinct x.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

struct SizeSummary {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  std::size_t samples = 0;
  double mean_spikes = 0;
  double mean_timesteps = 0;
  double mean_path_length = 0;
  double mean_shortest_path = 0;
  std::size_t divergences = 0;
};

struct BenchResult {
  BenchConfig config;
  std::vector<BenchRow> rows;  // sorted by (size, sample)
  std::vector<SizeSummary> sizes;
  LinearFit spikes_vs_edges;   // per-size mean spikes per query against |E|
  LinearFit log_log;           // log(mean spikes) against log |E|
  std::size_t divergences = 0;
  std::size_t invariant_violations = 0;
  std::size_t failures = 0;

  nlohmann::json summary_json() const;
};

// Runs one instance (exposed for tests and replay).
BenchRow bench_instance(const BenchConfig& cfg, std::size_t n, std::size_t sample);

// Instances are spread over cfg.threads workers; rows come back in
// (size, sample) order regardless of scheduling.
BenchResult run_bench(const BenchConfig& cfg,
                      const std::function<void(const BenchRow&)>& on_row = {});

extern const char* const kBenchCsvHeader;
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
// Whitespace-separated per-size means for gnuplot.
void write_gnuplot(std::ostream& out, const BenchResult& r);
// One DIMACS file per diverging or failing instance; returns the paths.
std::vector<std::string> write_counterexamples(const BenchResult& r, const std::string& dir);

}  // namespace spikeflow
