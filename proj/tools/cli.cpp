#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spikeflow/bench.hpp"
#include "spikeflow/error.hpp"
#include "spikeflow/flow.hpp"
#include "spikeflow/naive_decider.hpp"
#include "spikeflow/netlist.hpp"
#include "spikeflow/snn.hpp"
#include "spikeflow/spiking_maxflow.hpp"
#include "spikeflow/tnfr.hpp"

namespace spikeflow {

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string format;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  return f;
}

// --out or the caller's stream
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(open_out(path));
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

FlowNetwork load_dimacs(const std::string& path) {
  auto f = open_in(path);
  return read_dimacs(f);
}

SpikingNetwork load_netlist(const std::string& path) {
  auto f = open_in(path);
  return parse_netlist(f);
}

std::string pick_format(const Globals& g, const char* fallback) {
  if (g.format.empty()) return fallback;
  return g.format;
}

Mutation parse_mutation(const std::string& m) {
  if (m == "none") return Mutation::none;
  if (m == "drop-failure") return Mutation::drop_failure_gadget;
  if (m == "bypass-failure") return Mutation::bypass_failure_gadget;
  throw InputError("unknown mutation '" + m + "' (none, drop-failure, bypass-failure)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spiking max-flow simulator and reduction tools", "spikeflow"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output path, - for stdout")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  std::function<void()> action;

  // generate
  auto* gen = app.add_subcommand("generate", "Random DAG flow network in DIMACS format");
  std::size_t gen_n = 0, gen_m = 0;
  std::int64_t gen_cmax = 10;
  std::string gen_suite;
  gen->add_option("-n,--nodes", gen_n, "Node count")->required();
  gen->add_option("-m,--edges", gen_m, "Edge count");
  gen->add_option("--suite", gen_suite, "Derive the edge count from a suite")
      ->check(CLI::IsMember({"sparse", "dense"}));
  gen->add_option("--cmax", gen_cmax, "Largest capacity")->capture_default_str();
  gen->callback([&] {
    action = [&] {
      const auto m = gen_suite.empty() ? gen_m : suite_edges(parse_suite(gen_suite), gen_n);
      if (gen_suite.empty() && !gen->count("--edges")) throw InputError("give --edges or --suite");
      const auto net = generate_random(gen_n, m, gen_cmax, g.seed);
      Sink sink(g.out, out);
      write_dimacs(*sink, net,
                   "generated nodes " + std::to_string(gen_n) + " edges " + std::to_string(m) +
                       " cmax " + std::to_string(gen_cmax) + " seed " + std::to_string(g.seed));
    };
  });

  // solve
  auto* sol = app.add_subcommand("solve", "Spiking Edmonds-Karp on a DIMACS network");
  std::string sol_in, sol_mode = "paper";
  std::size_t sol_wm = 8;
  sol->add_option("input", sol_in, "DIMACS file")->required();
  sol->add_option("--mode", sol_mode, "paper or residual")->capture_default_str();
  sol->add_option("--wm", sol_wm, "Working-memory cells")->capture_default_str();
  sol->callback([&] {
    action = [&] {
      const auto net = load_dimacs(sol_in);
      const auto res = solve(net, parse_solve_mode(sol_mode), {.wm_capacity = sol_wm});
      if (const auto bad = validate_flow(net, res.flow); !bad.empty())
        throw InvariantError("solver returned an invalid flow: " + bad.front().message);
      Sink sink(g.out, out);
      if (pick_format(g, "json") == "csv") {
        *sink << "edge,u,v,cap,flow\n";
        for (EdgeId e = 0; e < net.edge_count(); ++e)
          *sink << e << ',' << net.edge(e).u + 1 << ',' << net.edge(e).v + 1 << ','
                << net.edge(e).cap << ',' << res.flow.f[e] << '\n';
      } else {
        *sink << res.to_json().dump(2) << '\n';
      }
    };
  });

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a netlist and emit its spike trace");
  std::string sim_in;
  std::int64_t sim_steps = 0;
  sim->add_option("input", sim_in, "Netlist file")->required();
  sim->add_option("--steps", sim_steps, "Steps to run")->required()->check(CLI::NonNegativeNumber);
  sim->callback([&] {
    action = [&] {
      const auto net = load_netlist(sim_in);
      const auto state = run(net, sim_steps, StopCondition::exact_step_count(sim_steps));
      Sink sink(g.out, out);
      if (pick_format(g, "csv") == "json") {
        nlohmann::json spikes = nlohmann::json::array();
        for (const auto& e : state.trace) spikes.push_back({e.time, e.neuron});
        *sink << nlohmann::json{{"steps", state.t},
                                {"energy", energy(state)},
                                {"spikes", spikes},
                                {"potential", state.potential}}
                     .dump(2)
              << '\n';
      } else {
        write_trace_csv(*sink, state.trace);
      }
    };
  });

  // bench
  auto* ben = app.add_subcommand("bench", "Random-suite sweep against classical Edmonds-Karp");
  BenchConfig bc;
  std::string ben_suite = "sparse", ben_mode = "paper", ben_summary, ben_gnuplot, ben_cex;
  ben->add_option("--suite", ben_suite, "sparse or dense")->capture_default_str();
  ben->add_option("--sizes", bc.sizes, "Node counts (default: sparse 5..100, dense 5..40)");
  ben->add_option("--samples", bc.samples, "Instances per size")->capture_default_str();
  ben->add_option("--cmax", bc.c_max, "Largest capacity")->capture_default_str();
  ben->add_option("--mode", ben_mode, "paper, residual or classical")->capture_default_str();
  ben->add_option("--threads", bc.threads, "Worker threads")->capture_default_str();
  ben->add_option("--summary", ben_summary, "Summary JSON path");
  ben->add_option("--gnuplot", ben_gnuplot, "Per-size means for gnuplot");
  ben->add_option("--counterexamples", ben_cex, "Directory for diverging instances")
      ->default_str("counterexamples");
  ben->callback([&] {
    action = [&] {
      bc.suite = parse_suite(ben_suite);
      bc.mode = parse_bench_mode(ben_mode);
      bc.seed = g.seed;
      const auto res = run_bench(bc);
      Sink sink(g.out, out);
      if (pick_format(g, "csv") == "json")
        *sink << res.summary_json().dump(2) << '\n';
      else
        write_bench_csv(*sink, res.rows);
      if (!ben_summary.empty()) {
        auto f = open_out(ben_summary);
        f << res.summary_json().dump(2) << '\n';
      }
      if (!ben_gnuplot.empty()) {
        auto f = open_out(ben_gnuplot);
        write_gnuplot(f, res);
      }
      if (res.divergences || res.failures)
        for (const auto& p : write_counterexamples(res, ben_cex.empty() ? "counterexamples" : ben_cex))
          err << "counterexample: " << p << '\n';
      if (res.invariant_violations)
        throw InvariantError(std::to_string(res.invariant_violations) + " invariant violations");
    };
  });

  // decide-naive
  auto* dec = app.add_subcommand("decide-naive", "Exponential spiking decider for max-flow > d");
  std::string dec_in, dec_netlist;
  std::int64_t dec_d = 0;
  std::uint64_t dec_guard = 4096;
  dec->add_option("input", dec_in, "DIMACS file")->required();
  dec->add_option("-d,--threshold", dec_d, "Decision threshold d")->required();
  dec->add_option("--guard", dec_guard, "Largest candidate space")->capture_default_str();
  dec->add_option("--netlist", dec_netlist, "Write the decider netlist here");
  dec->callback([&] {
    action = [&] {
      const auto net = load_dimacs(dec_in);
      if (!dec_netlist.empty()) {
        auto f = open_out(dec_netlist);
        write_netlist(f, build_decider(net, dec_d, {.guard = dec_guard}).net);
      }
      const auto r = decide_naive(net, dec_d, {.guard = dec_guard});
      Sink sink(g.out, out);
      if (pick_format(g, "csv") == "json")
        *sink << nlohmann::json{{"accept", r.accept},
                                {"f_max", r.f_max},
                                {"candidates", r.candidates},
                                {"accept_time", r.accept_time},
                                {"reject_time", r.reject_time},
                                {"neurons", r.neurons},
                                {"synapses", r.synapses},
                                {"report", r.report.to_json()}}
                     .dump(2)
              << '\n';
      else
        *sink << (r.accept ? "accept" : "reject") << '\n';
    };
  });

  // reduce
  auto* red = app.add_subcommand("reduce", "Spiking network with (t, e) bounds to a TNFR instance");
  std::string red_in, red_witness, red_mut = "none";
  std::int64_t red_t = 1, red_e = 1;
  red->add_option("input", red_in, "Netlist (MODE overflow, roles input/accept/reject)")->required();
  red->add_option("-t,--time", red_t, "Time bound")->required();
  red->add_option("-e,--energy", red_e, "Energy bound")->required();
  red->add_option("--mutation", red_mut, "none, drop-failure or bypass-failure")->capture_default_str();
  red->add_option("--witness", red_witness, "Write the value-3 witness CSV when the network accepts");
  red->callback([&] {
    action = [&] {
      const ReductionConfig cfg{load_netlist(red_in), red_t, red_e};
      const auto r = reduce(cfg, parse_mutation(red_mut));
      Sink sink(g.out, out);
      write_tnfr(*sink, r.instance);
      if (!red_witness.empty()) {
        if (const auto w = simulate_to_witness(cfg, r)) {
          auto f = open_out(red_witness);
          write_witness_csv(f, *w);
        } else {
          err << "network rejects; no witness written\n";
        }
      }
    };
  });

  // tnfr-check
  auto* chk = app.add_subcommand("tnfr-check", "Exact feasibility of a TNFR instance");
  std::string chk_in, chk_witness;
  FeasibleOptions fo;
  chk->add_option("input", chk_in, "TNFR file")->required();
  chk->add_option("--max-arcs", fo.max_arcs, "Arc guard")->capture_default_str();
  chk->add_option("--budget", fo.node_budget, "Search node budget")->capture_default_str();
  chk->add_option("--witness", chk_witness, "Write the flow CSV when feasible");
  chk->callback([&] {
    action = [&] {
      auto f = open_in(chk_in);
      const auto inst = read_tnfr(f);
      const auto r = check_feasible(inst, fo);
      Sink sink(g.out, out);
      if (pick_format(g, "csv") == "json")
        *sink << nlohmann::json{{"feasible", r.feasible}, {"search_nodes", r.nodes}, {"flow", r.flow}}.dump(2)
              << '\n';
      else
        *sink << (r.feasible ? "yes" : "no") << '\n';
      if (r.feasible && !chk_witness.empty()) {
        auto w = open_out(chk_witness);
        write_witness_csv(w, r.flow);
      }
    };
  });

  // verify-reduction
  auto* ver = app.add_subcommand("verify-reduction", "Check the reduction biconditional on one network");
  std::string ver_in, ver_mut = "none", ver_dump;
  std::int64_t ver_t = 1, ver_e = 1;
  FeasibleOptions vo{.max_arcs = 4096};
  ver->add_option("input", ver_in, "Netlist")->required();
  ver->add_option("-t,--time", ver_t, "Time bound")->required();
  ver->add_option("-e,--energy", ver_e, "Energy bound")->required();
  ver->add_option("--mutation", ver_mut, "none, drop-failure or bypass-failure")->capture_default_str();
  ver->add_option("--max-arcs", vo.max_arcs, "Arc guard")->capture_default_str();
  ver->add_option("--dump", ver_dump, "Write the TNFR instance here when the check fails");
  ver->callback([&] {
    action = [&] {
      const ReductionConfig cfg{load_netlist(ver_in), ver_t, ver_e};
      const auto mut = parse_mutation(ver_mut);
      const auto rep = verify_reduction(cfg, mut, vo);
      Sink sink(g.out, out);
      if (pick_format(g, "csv") == "json")
        *sink << nlohmann::json{{"passed", rep.passed},
                                {"snn_accepts", rep.snn_accepts},
                                {"witness_valid", rep.witness_valid},
                                {"checker_feasible", rep.checker_feasible},
                                {"nodes", rep.nodes},
                                {"arcs", rep.arcs},
                                {"search_nodes", rep.search_nodes},
                                {"detail", rep.detail}}
                     .dump(2)
              << '\n';
      else
        *sink << (rep.passed ? "pass" : "FAIL") << ": " << rep.detail << '\n';
      if (!rep.passed) {
        const auto inst = reduce(cfg, mut).instance;
        if (!ver_dump.empty()) {
          auto f = open_out(ver_dump);
          write_tnfr(f, inst);
        } else {
          write_tnfr(err, inst);
        }
        throw InvariantError("reduction biconditional violated: " + rep.detail);
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  try {
    action();
    return 0;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const GuardError& e) {
    err << "guard exceeded: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "invariant violation: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace spikeflow
