#include <algorithm>

#include "spikeflow/error.hpp"
#include "spikeflow/tnfr.hpp"

namespace spikeflow {

namespace {

struct Roles {
  std::vector<NeuronId> constant, accept, reject;
};

Roles find_roles(const SpikingNetwork& net) {
  Roles r;
  for (NeuronId i = 0; i < net.size(); ++i) {
    switch (net.neuron(i).role) {
      case Role::input: r.constant.push_back(i); break;
      case Role::accept: r.accept.push_back(i); break;
      case Role::reject: r.reject.push_back(i); break;
      default: break;
    }
  }
  return r;
}

bool delay0_acyclic(const SpikingNetwork& net) {
  const auto n = net.size();
  std::vector<std::vector<NeuronId>> adj(n);
  std::vector<int> indeg(n, 0);
  for (const auto& s : net.synapses())
    if (s.delay == 0) {
      adj[s.pre].push_back(s.post);
      ++indeg[s.post];
    }
  std::vector<NeuronId> ready;
  for (NeuronId i = 0; i < n; ++i)
    if (!indeg[i]) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    const auto u = ready.back();
    ready.pop_back();
    ++seen;
    for (auto v : adj[u])
      if (!--indeg[v]) ready.push_back(v);
  }
  return seen == n;
}

std::vector<AssumptionViolation> structural_violations(const ReductionConfig& cfg) {
  std::vector<AssumptionViolation> out;
  const auto& net = cfg.snn;
  const auto n = static_cast<std::int64_t>(net.size()) - 1;
  if (cfg.t < 1) out.push_back({0, "time bound t must be at least 1"});
  if (cfg.e < 1 || cfg.e > n * std::max<std::int64_t>(cfg.t, 1))
    out.push_back({0, "energy bound e must lie in [1, n*t]"});

  const auto roles = find_roles(net);
  if (roles.constant.size() != 1) out.push_back({2, "need exactly one constant (input) neuron"});
  if (roles.accept.size() != 1) out.push_back({6, "need exactly one accept neuron"});
  if (roles.reject.size() != 1) out.push_back({6, "need exactly one reject neuron"});
  if (roles.constant.size() == 1) {
    const auto c = roles.constant[0];
    if (net.neuron(c).threshold != 1) out.push_back({2, "constant neuron must have threshold 1"});
    for (const auto& s : net.synapses())
      if (s.post == c) {
        out.push_back({2, "constant neuron has an incoming synapse"});
        break;
      }
  }
  for (NeuronId i = 0; i < net.size(); ++i) {
    const auto& nr = net.neuron(i);
    const auto who = "neuron " + std::to_string(i);
    if (nr.v0 != 0) out.push_back({2, who + " has a bias (v0 != 0)"});
    if (nr.threshold < 1) out.push_back({3, who + " has threshold below 1"});
    if (!nr.leak.is_one()) out.push_back({4, who + " leaks"});
  }
  if (!net.schedule().empty()) out.push_back({2, "scheduled fires act as extra biases"});
  for (const auto& s : net.synapses())
    if (s.weight < 0) {
      out.push_back({3, "negative synaptic weight"});
      break;
    }
  if (!delay0_acyclic(net)) out.push_back({3, "delay-0 synapses form a cycle"});
  if (net.reset_mode != ResetMode::overflow) out.push_back({5, "network must use overflow reset"});
  return out;
}

ReductionRun simulate_unchecked(const ReductionConfig& cfg, NeuronId constant, NeuronId accept,
                                NeuronId reject) {
  SpikingNetwork net = cfg.snn;
  for (std::int64_t k = 1; k <= cfg.t; ++k) net.schedule(constant, k - 1);
  const Simulator sim(net);
  auto state = sim.initial_state();
  const auto n = net.size();
  ReductionRun run;
  run.fired.assign(n, std::vector<std::uint8_t>(static_cast<std::size_t>(cfg.t) + 1, 0));
  run.carry.assign(n, std::vector<std::int64_t>(static_cast<std::size_t>(cfg.t) + 1, 0));
  for (std::int64_t k = 1; k <= cfg.t; ++k) {
    for (NeuronId id : sim.step(state)) {
      run.fired[id][k] = 1;
      if (id != constant) ++run.spikes;
      if (id == reject) ++run.reject_spikes;
      if (id == accept && run.accept_step < 0) run.accept_step = k;
    }
    for (NeuronId id = 0; id < n; ++id) run.carry[id][k] = state.potential[id];
  }
  run.accepts = run.accept_step >= 1 && run.accept_step <= cfg.t && run.spikes <= cfg.e - 1;
  return run;
}

std::vector<AssumptionViolation> dynamic_violations(const ReductionConfig& cfg,
                                                    const ReductionRun& run, NeuronId constant,
                                                    NeuronId reject) {
  std::vector<AssumptionViolation> out;
  for (NeuronId id = 0; id < cfg.snn.size(); ++id) {
    if (id == constant) continue;
    for (std::int64_t k = 1; k <= cfg.t; ++k)
      if (run.carry[id][k] >= cfg.snn.neuron(id).threshold) {
        out.push_back({5, "neuron " + std::to_string(id) + " carries potential " +
                              std::to_string(run.carry[id][k]) + " >= threshold after step " +
                              std::to_string(k)});
        break;
      }
  }
  const auto kacc = run.accept_step < 0 ? cfg.t + 1 : run.accept_step;
  for (std::int64_t k = 1; k <= cfg.t; ++k) {
    const bool want = k < kacc;
    if (static_cast<bool>(run.fired[reject][k]) != want) {
      out.push_back({6, "reject neuron " + std::string(want ? "silent" : "fires") + " at step " +
                            std::to_string(k) + " (first accept spike at " +
                            (run.accept_step < 0 ? std::string("none") : std::to_string(kacc)) +
                            ")"});
      break;
    }
  }
  return out;
}

std::string describe(const std::vector<AssumptionViolation>& v) {
  std::string msg;
  for (const auto& x : v) {
    if (!msg.empty()) msg += "; ";
    msg += (x.index ? "assumption " + std::to_string(x.index) : std::string("configuration")) +
           ": " + x.message;
  }
  return msg;
}

std::string at(NeuronId a, std::int64_t k) {
  return "(neuron=" + std::to_string(a) + ",step=" + std::to_string(k) + ")";
}

}  // namespace

std::vector<AssumptionViolation> check_assumptions(const ReductionConfig& cfg) {
  auto out = structural_violations(cfg);
  if (!out.empty()) return out;
  const auto roles = find_roles(cfg.snn);
  const auto run = simulate_unchecked(cfg, roles.constant[0], roles.accept[0], roles.reject[0]);
  return dynamic_violations(cfg, run, roles.constant[0], roles.reject[0]);
}

ReductionRun simulate_reduction(const ReductionConfig& cfg) {
  const auto v = structural_violations(cfg);
  if (!v.empty()) throw InputError(describe(v));
  const auto roles = find_roles(cfg.snn);
  return simulate_unchecked(cfg, roles.constant[0], roles.accept[0], roles.reject[0]);
}

Reduction reduce(const ReductionConfig& cfg, Mutation mutation) {
  if (const auto v = check_assumptions(cfg); !v.empty()) throw InputError(describe(v));
  const auto roles = find_roles(cfg.snn);
  const auto& net = cfg.snn;
  const auto T = cfg.t;
  const auto n = static_cast<NeuronId>(net.size());

  Reduction red;
  red.constant = roles.constant[0];
  red.accept = roles.accept[0];
  red.reject = roles.reject[0];
  auto& g = red.instance;
  g.d = 2;
  using K = TnfrNodeKind;
  using R = ArcRule::Kind;
  auto arc = [&](std::uint32_t u, std::uint32_t v, std::int64_t lo, std::int64_t hi,
                 std::string label, ArcRule rule) {
    g.add_arc(u, v, lo, hi, std::move(label));
    red.rules.push_back(rule);
  };
  auto fixed = [](std::int64_t amount) { return ArcRule{R::fixed, amount}; };

  // Master source and sink with one channel per constraint.
  const auto s = g.add_node(K::source, "master source");
  const auto t = g.add_node(K::sink, "master sink");
  const auto s_e = g.add_node(K::normal, "energy in");
  const auto s_t = g.add_node(K::normal, "time in");
  const auto s_f = g.add_node(K::normal, "failure in");
  const auto t_e = g.add_node(K::normal, "energy out");
  const auto t_t = g.add_node(K::normal, "time out");
  const auto t_f = g.add_node(K::normal, "failure out");
  for (auto x : {s_e, s_t, s_f}) arc(s, x, 0, 1, "master", fixed(1));
  for (auto x : {t_e, t_t, t_f}) arc(x, t, 0, 1, "master", fixed(1));

  // Energy: one unit per non-constant spike; the chain passes at most e units.
  std::vector<std::uint32_t> j(T + 1), h(T + 1), f(T + 1);
  for (std::int64_t k = 1; k <= T; ++k) j[k] = g.add_node(K::normal, "energy step " + std::to_string(k));
  const auto r_e = g.add_node(K::reservoir_sink, "energy reservoir");
  arc(s_e, j[1], 0, 1, "energy entry", fixed(1));
  for (std::int64_t k = 1; k < T; ++k)
    arc(j[k], j[k + 1], 0, cfg.e, "energy chain " + std::to_string(k), {R::energy_chain, 0, 0, k});
  arc(j[T], t_e, 0, 1, "energy exit", fixed(1));
  if (cfg.e >= 2) arc(j[T], r_e, 0, cfg.e - 1, "energy overflow", {R::energy_excess});

  // Time: one unit per reject spike; at most t-1 of them fit.
  for (std::int64_t k = 1; k <= T; ++k) h[k] = g.add_node(K::normal, "time step " + std::to_string(k));
  const auto r_t = g.add_node(K::reservoir_sink, "time reservoir");
  arc(s_t, h[1], 0, 1, "time entry", fixed(1));
  for (std::int64_t k = 1; k < T; ++k)
    arc(h[k], h[k + 1], 0, T, "time chain " + std::to_string(k), {R::time_chain, 0, 0, k});
  arc(h[T], t_t, 0, 1, "time exit", fixed(1));
  if (T >= 2) arc(h[T], r_t, 0, T - 1, "time overflow", {R::time_excess});

  // Constant neuron supply. The extra unit feeds the failure gate, so the
  // failure channel can only carry flow while the constant neuron fires.
  const bool failure = mutation != Mutation::drop_failure_gadget;
  const auto p_con = g.add_node(K::reservoir_source, "constant supply");
  const auto n_src = g.add_node(K::normal, "constant hub");
  arc(p_con, n_src, T + 1, T + 1, "constant supply", fixed(T + 1));

  // Failure channel: one unit from s_f to t_f, and any neuron that does not
  // behave (skips a due spike or drops potential) must push a unit into it.
  if (failure) {
    const auto gate = g.add_node(K::normal, "failure gate");
    const auto gate_out = g.add_node(K::normal, "failure gate out");
    const auto r_g = g.add_node(K::reservoir_sink, "failure gate reservoir");
    for (std::int64_t k = 1; k <= T; ++k) f[k] = g.add_node(K::normal, "failure step " + std::to_string(k));
    arc(s_f, gate, 0, 1, "failure entry", fixed(1));
    arc(n_src, gate, 1, 1, "constant to gate", fixed(1));
    arc(gate, gate_out, 2, 2, "failure gate", fixed(2));
    arc(gate_out, r_g, 1, 1, "failure gate drain", fixed(1));
    arc(gate_out, f[1], 0, 1, "failure chain start", fixed(1));
    for (std::int64_t k = 1; k < T; ++k)
      arc(f[k], f[k + 1], 0, 1, "failure chain " + std::to_string(k), {R::zero});
    for (std::int64_t k = 1; k <= T; ++k)
      arc(f[k], t_f, 0, 1, "failure exit " + std::to_string(k), k == 1 ? fixed(1) : ArcRule{R::zero});
  }
  if (mutation == Mutation::bypass_failure_gadget) arc(s_f, t_f, 0, 1, "failure bypass", {R::zero});

  // Neuron vertices.
  std::vector<std::vector<std::uint32_t>> nv(n, std::vector<std::uint32_t>(T + 1));
  for (NeuronId a = 0; a < n; ++a)
    for (std::int64_t k = 1; k <= T; ++k) nv[a][k] = g.add_node(K::normal, "potential " + at(a, k));
  for (std::int64_t k = 1; k <= T; ++k)
    arc(n_src, nv[red.constant][k], 1, 1, "constant " + at(red.constant, k), fixed(1));

  std::vector<std::vector<const Synapse*>> out_syn(n);
  for (const auto& syn : net.synapses())
    if (syn.weight > 0) out_syn[syn.pre].push_back(&syn);

  for (NeuronId a = 0; a < n; ++a) {
    const auto th = net.neuron(a).threshold;
    const bool is_const = a == red.constant;
    std::uint32_t carry_sink = 0, late_sink = 0;
    if (!is_const && th > 1) carry_sink = g.add_node(K::reservoir_sink, "carry reservoir " + std::to_string(a));
    for (std::int64_t k = 1; k <= T; ++k) {
      const auto v = nv[a][k];
      if (!is_const) {
        if (th > 1)
          arc(v, k < T ? nv[a][k + 1] : carry_sink, 0, th - 1, "carry " + at(a, k), {R::carry, 0, a, k});
        if (failure) arc(v, f[k], 0, 1, "failure " + at(a, k), {R::zero});
      }
      // Spike: the threshold leaves as one exact bundle and is split into
      // exact parts, so a spike is all-or-nothing.
      struct Part {
        std::uint32_t to;
        std::int64_t amount;
        std::string label;
      };
      std::vector<Part> parts;
      if (!is_const) parts.push_back({j[k], 1, "energy unit " + at(a, k)});
      if (a == red.reject) parts.push_back({h[k], 1, "time unit " + at(a, k)});
      for (const Synapse* syn : out_syn[a]) {
        const auto when = k + static_cast<std::int64_t>(syn->delay);
        std::uint32_t to;
        if (when <= T) {
          to = nv[syn->post][when];
        } else {
          if (!late_sink) late_sink = g.add_node(K::reservoir_sink, "late arrivals " + std::to_string(a));
          to = late_sink;
        }
        parts.push_back({to, syn->weight,
                         "synapse " + std::to_string(a) + "->" + std::to_string(syn->post) + " at step " +
                             std::to_string(k)});
      }
      std::int64_t used = 0;
      for (const auto& p : parts) used += p.amount;
      const auto balance = th - used;
      const ArcRule on{R::on_fire, 0, a, k};
      auto on_fire = [&](std::int64_t amount) {
        ArcRule r = on;
        r.amount = amount;
        return r;
      };
      const auto o1 = g.add_node(K::normal, "spike " + at(a, k));
      arc(v, o1, th, th, "fire " + at(a, k), on_fire(th));
      auto hub = o1;
      if (balance < 0) {
        const auto p = g.add_node(K::reservoir_source, "spike top-up " + at(a, k));
        arc(p, o1, -balance, -balance, "top-up " + at(a, k), on_fire(-balance));
        hub = g.add_node(K::normal, "spike split " + at(a, k));
        arc(o1, hub, used, used, "bundle " + at(a, k), on_fire(used));
      } else if (balance > 0) {
        const auto r = g.add_node(K::reservoir_sink, "spike remainder " + at(a, k));
        arc(o1, r, balance, balance, "remainder " + at(a, k), on_fire(balance));
      }
      for (auto& p : parts) arc(hub, p.to, p.amount, p.amount, std::move(p.label), on_fire(p.amount));
    }
  }
  g.validate();
  return red;
}

std::vector<std::int64_t> dictated_flow(const ReductionConfig& cfg, const Reduction& red) {
  const auto run = simulate_reduction(cfg);
  std::vector<std::int64_t> spikes_upto(cfg.t + 1, 0), reject_upto(cfg.t + 1, 0);
  for (std::int64_t k = 1; k <= cfg.t; ++k) {
    spikes_upto[k] = spikes_upto[k - 1];
    reject_upto[k] = reject_upto[k - 1] + run.fired[red.reject][k];
    for (NeuronId a = 0; a < cfg.snn.size(); ++a)
      if (a != red.constant) spikes_upto[k] += run.fired[a][k];
  }
  std::vector<std::int64_t> flow;
  flow.reserve(red.rules.size());
  for (const auto& r : red.rules) {
    switch (r.kind) {
      case ArcRule::Kind::fixed: flow.push_back(r.amount); break;
      case ArcRule::Kind::on_fire: flow.push_back(run.fired[r.neuron][r.k] ? r.amount : 0); break;
      case ArcRule::Kind::carry: flow.push_back(run.carry[r.neuron][r.k]); break;
      case ArcRule::Kind::energy_chain: flow.push_back(1 + spikes_upto[r.k]); break;
      case ArcRule::Kind::energy_excess: flow.push_back(run.spikes); break;
      case ArcRule::Kind::time_chain: flow.push_back(1 + reject_upto[r.k]); break;
      case ArcRule::Kind::time_excess: flow.push_back(run.reject_spikes); break;
      case ArcRule::Kind::zero: flow.push_back(0); break;
    }
  }
  return flow;
}

std::optional<std::vector<std::int64_t>> simulate_to_witness(const ReductionConfig& cfg,
                                                             const Reduction& red) {
  if (!simulate_reduction(cfg).accepts) return std::nullopt;
  return dictated_flow(cfg, red);
}

VerifyReport verify_reduction(const ReductionConfig& cfg, Mutation mutation, FeasibleOptions opts) {
  const auto red = reduce(cfg, mutation);
  const auto run = simulate_reduction(cfg);
  VerifyReport rep;
  rep.snn_accepts = run.accepts;
  rep.nodes = red.instance.node_count();
  rep.arcs = red.instance.arc_count();
  if (run.accepts) {
    const auto w = simulate_to_witness(cfg, red);
    const auto bad = tnfr_violations(red.instance, *w);
    rep.witness_valid = bad.empty() && tnfr_value(red.instance, *w) > red.instance.d;
    if (!bad.empty()) rep.detail = "witness: " + bad.front();
  }
  const auto res = check_feasible(red.instance, opts);
  rep.checker_feasible = res.feasible;
  rep.search_nodes = res.nodes;
  rep.passed = rep.checker_feasible == rep.snn_accepts && (!rep.snn_accepts || rep.witness_valid);
  if (rep.detail.empty())
    rep.detail = std::string("network ") + (rep.snn_accepts ? "accepts" : "rejects") + ", checker says " +
                 (rep.checker_feasible ? "feasible" : "infeasible");
  return rep;
}

}  // namespace spikeflow
