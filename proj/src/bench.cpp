#include "spikeflow/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "spikeflow/error.hpp"
#include "spikeflow/spiking_maxflow.hpp"

namespace spikeflow {

const char* to_string(Suite s) { return s == Suite::sparse ? "sparse" : "dense"; }

const char* to_string(BenchMode m) {
  switch (m) {
    case BenchMode::paper: return "paper";
    case BenchMode::residual: return "residual";
    case BenchMode::classical: return "classical";
  }
  return "?";
}

Suite parse_suite(const std::string& text) {
  if (text == "sparse") return Suite::sparse;
  if (text == "dense") return Suite::dense;
  throw InputError("unknown suite '" + text + "' (sparse, dense)");
}

BenchMode parse_bench_mode(const std::string& text) {
  if (text == "paper" || text == "paper-faithful") return BenchMode::paper;
  if (text == "residual") return BenchMode::residual;
  if (text == "classical") return BenchMode::classical;
  throw InputError("unknown mode '" + text + "' (paper, residual, classical)");
}

std::size_t suite_edges(Suite s, std::size_t n) {
  return s == Suite::sparse ? n * 14 / 10 : n * (n - 1) / 2;
}

std::vector<std::size_t> default_sizes(Suite s) {
  std::vector<std::size_t> out;
  for (std::size_t n = 5; n <= (s == Suite::sparse ? 100u : 40u); ++n) out.push_back(n);
  return out;
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t n, std::size_t sample) {
  return splitmix64(splitmix64(seed ^ (static_cast<std::uint64_t>(n) << 32)) + sample);
}

void BenchConfig::validate() const {
  if (samples < 1) throw InputError("samples must be at least 1");
  if (c_max < 1) throw InputError("c_max must be at least 1");
  if (threads < 1) throw InputError("threads must be at least 1");
  for (auto n : sizes) {
    if (n < 2) throw InputError("sizes must be at least 2");
    const auto m = suite_edges(suite, n);
    if (m + 1 < n || m > n * (n - 1) / 2)
      throw InputError("suite " + std::string(to_string(suite)) + " cannot build " +
                       std::to_string(m) + " edges on " + std::to_string(n) + " nodes");
  }
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("least squares needs two points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw InputError("least squares needs two distinct x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  f.points = x.size();
  return f;
}

BenchRow bench_instance(const BenchConfig& cfg, std::size_t n, std::size_t sample) {
  BenchRow row;
  row.n_nodes = n;
  row.n_edges = suite_edges(cfg.suite, n);
  row.sample = sample;
  row.seed = instance_seed(cfg.seed, n, sample);
  try {
    const auto g = generate_random(n, row.n_edges, cfg.c_max, row.seed);
    row.shortest_path = shortest_path_length(g);
    std::size_t classical_aug = 0;
    row.classical_value = edmonds_karp(g, &classical_aug).value;
    row.classical_time_steps =
        static_cast<std::int64_t>((classical_aug + 1) * (g.node_count() + g.edge_count()));
    if (cfg.mode == BenchMode::classical) {
      row.value = row.classical_value;
      row.augmentations = classical_aug;
      return row;
    }
    const auto res =
        solve(g, cfg.mode == BenchMode::paper ? SolveMode::paper : SolveMode::residual);
    row.value = res.flow.value;
    row.delta = row.classical_value - row.value;
    row.queries = res.episodes.size();
    row.augmentations = res.augmentations;
    row.controller_time = res.report.controller_time;
    row.wm_peak = res.report.controller_wm_peak;
    if (!validate_flow(g, res.flow).empty()) ++row.invariant_violations;

    const auto S = res.search_edges;
    double spikes = 0, steps = 0, path = 0;
    std::size_t paths = 0;
    for (const auto& ep : res.episodes) {
      spikes += static_cast<double>(ep.spikes);
      steps += static_cast<double>(ep.timesteps);
      if (!ep.path.empty()) {
        path += static_cast<double>(ep.path_length);
        ++paths;
      }
      row.max_query_timesteps = std::max(row.max_query_timesteps, ep.timesteps);
      row.max_query_spikes = std::max(row.max_query_spikes, ep.spikes);
      row.max_neuron_spikes = std::max(row.max_neuron_spikes, ep.max_spikes_per_search_neuron);
      if (ep.timesteps > 2 * S + 1) ++row.invariant_violations;
      if (ep.spikes > 3 * S + 1) ++row.invariant_violations;
      if (ep.max_spikes_per_search_neuron > 1) ++row.invariant_violations;
    }
    if (!res.episodes.empty()) row.last_query_timesteps = res.episodes.back().timesteps;
    if (cfg.mode == BenchMode::paper && res.augmentations > g.edge_count()) ++row.invariant_violations;
    if (cfg.mode == BenchMode::residual && row.delta != 0) ++row.invariant_violations;
    if (row.queries) {
      row.mean_spikes = spikes / static_cast<double>(row.queries);
      row.mean_timesteps = steps / static_cast<double>(row.queries);
    }
    if (paths) row.mean_path_length = path / static_cast<double>(paths);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

BenchResult run_bench(const BenchConfig& cfg_in, const std::function<void(const BenchRow&)>& on_row) {
  BenchConfig cfg = cfg_in;
  if (cfg.sizes.empty()) cfg.sizes = default_sizes(cfg.suite);
  cfg.validate();

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (auto n : cfg.sizes)
    for (std::size_t s = 0; s < cfg.samples; ++s) jobs.emplace_back(n, s);
  std::sort(jobs.begin(), jobs.end());

  BenchResult out;
  out.config = cfg;
  out.rows.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      out.rows[i] = bench_instance(cfg, jobs[i].first, jobs[i].second);
      if (on_row) {
        std::lock_guard lock(report);
        on_row(out.rows[i]);
      }
    }
  };
  const auto workers = std::min(cfg.threads, std::max<std::size_t>(jobs.size(), 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<double> xs, ys, lx, ly;
  for (std::size_t i = 0; i < out.rows.size();) {
    SizeSummary s;
    s.n_nodes = out.rows[i].n_nodes;
    s.n_edges = out.rows[i].n_edges;
    std::size_t j = i;
    for (; j < out.rows.size() && out.rows[j].n_nodes == s.n_nodes; ++j) {
      const auto& r = out.rows[j];
      out.invariant_violations += r.invariant_violations;
      if (!r.error.empty()) {
        ++out.failures;
        continue;
      }
      ++s.samples;
      s.mean_spikes += r.mean_spikes;
      s.mean_timesteps += r.mean_timesteps;
      s.mean_path_length += r.mean_path_length;
      s.mean_shortest_path += static_cast<double>(r.shortest_path);
      if (r.delta != 0) ++s.divergences;
    }
    if (s.samples) {
      const auto k = static_cast<double>(s.samples);
      s.mean_spikes /= k;
      s.mean_timesteps /= k;
      s.mean_path_length /= k;
      s.mean_shortest_path /= k;
      xs.push_back(static_cast<double>(s.n_edges));
      ys.push_back(s.mean_spikes);
      if (s.mean_spikes > 0) {
        lx.push_back(std::log(static_cast<double>(s.n_edges)));
        ly.push_back(std::log(s.mean_spikes));
      }
    }
    out.divergences += s.divergences;
    out.sizes.push_back(s);
    i = j;
  }
  if (cfg.mode != BenchMode::classical) {
    if (xs.size() >= 2 && xs.front() != xs.back()) out.spikes_vs_edges = least_squares(xs, ys);
    if (lx.size() >= 2 && lx.front() != lx.back()) out.log_log = least_squares(lx, ly);
  }
  return out;
}

nlohmann::json BenchResult::summary_json() const {
  using nlohmann::json;
  auto fit = [](const LinearFit& f) {
    return json{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.points}};
  };
  json sizes_json = json::array();
  for (const auto& s : sizes)
    sizes_json.push_back({{"n_nodes", s.n_nodes},
                          {"n_edges", s.n_edges},
                          {"samples", s.samples},
                          {"mean_spikes", s.mean_spikes},
                          {"mean_timesteps", s.mean_timesteps},
                          {"mean_path_length", s.mean_path_length},
                          {"mean_shortest_path", s.mean_shortest_path},
                          {"divergences", s.divergences}});
  return json{{"suite", to_string(config.suite)},
              {"mode", to_string(config.mode)},
              {"seed", config.seed},
              {"samples", config.samples},
              {"c_max", config.c_max},
              {"instances", rows.size()},
              {"divergences", divergences},
              {"invariant_violations", invariant_violations},
              {"failures", failures},
              {"spikes_vs_edges", fit(spikes_vs_edges)},
              {"log_log_spikes_vs_edges", fit(log_log)},
              {"sizes", sizes_json}};
}

const char* const kBenchCsvHeader =
    "n_nodes,n_edges,sample,seed,mean_spikes,mean_timesteps,mean_path_length,shortest_path,"
    "queries,augmentations,value,classical_value,delta,classical_time_steps,controller_time,"
    "wm_peak,max_query_timesteps,last_query_timesteps,max_query_spikes,max_neuron_spikes,invariant_violations,error";

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << r.n_nodes << ',' << r.n_edges << ',' << r.sample << ',' << r.seed << ','
        << r.mean_spikes << ',' << r.mean_timesteps << ',' << r.mean_path_length << ','
        << r.shortest_path << ',' << r.queries << ',' << r.augmentations << ',' << r.value << ','
        << r.classical_value << ',' << r.delta << ',' << r.classical_time_steps << ','
        << r.controller_time << ',' << r.wm_peak << ',' << r.max_query_timesteps << ','
        << r.last_query_timesteps << ',' << r.max_query_spikes << ',' << r.max_neuron_spikes << ',' << r.invariant_violations << ','
        << err << '\n';
  }
}

void write_gnuplot(std::ostream& out, const BenchResult& r) {
  out << "# suite " << to_string(r.config.suite) << " mode " << to_string(r.config.mode) << '\n'
      << "# n_nodes n_edges mean_spikes mean_timesteps mean_path_length mean_shortest_path\n";
  for (const auto& s : r.sizes)
    out << s.n_nodes << ' ' << s.n_edges << ' ' << s.mean_spikes << ' ' << s.mean_timesteps << ' '
        << s.mean_path_length << ' ' << s.mean_shortest_path << '\n';
}

std::vector<std::string> write_counterexamples(const BenchResult& r, const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& row : r.rows) {
    if (row.delta == 0 && row.error.empty()) continue;
    std::filesystem::create_directories(dir);
    const auto path = dir + "/counterexample_n" + std::to_string(row.n_nodes) + "_s" +
                      std::to_string(row.sample) + ".max";
    std::ofstream f(path);
    if (!f) throw InputError("cannot write " + path);
    const auto g = generate_random(row.n_nodes, row.n_edges, r.config.c_max, row.seed);
    write_dimacs(f, g,
                 "mode " + std::string(to_string(r.config.mode)) + " value " +
                     std::to_string(row.value) + " classical " + std::to_string(row.classical_value) +
                     " seed " + std::to_string(row.seed) + (row.error.empty() ? "" : " error " + row.error));
    paths.push_back(path);
  }
  return paths;
}

}  // namespace spikeflow
