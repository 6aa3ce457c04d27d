#include "spikeflow/naive_decider.hpp"

#include <algorithm>

#include "spikeflow/error.hpp"

namespace spikeflow {

std::int64_t naive_f_max(const FlowNetwork& g) {
  std::int64_t f = g.max_capacity();
  for (NodeId n = 0; n < g.node_count(); ++n) {
    if (n == g.source() || n == g.sink()) continue;
    std::int64_t in = 0, out = 0;
    for (EdgeId e : g.in_edges(n)) in += g.edge(e).cap;
    for (EdgeId e : g.out_edges(n)) out += g.edge(e).cap;
    f = std::max(f, std::min(in, out));
  }
  return f;
}

NeuronId add_clock(SpikingNetwork& net) {
  const NeuronId c = net.add_neuron({.threshold = 1, .reset = 0, .v0 = 1});
  net.add_synapse({c, c, 1, 1});
  return c;
}

ConservationSubnet add_conservation_subnet(SpikingNetwork& net, NeuronId clock,
                                           std::int64_t flow_in, std::int64_t flow_out,
                                           std::int64_t timer_offset) {
  if (flow_in < 0 || flow_out < 0 || flow_in > timer_offset || flow_out > timer_offset)
    throw InputError("timer value outside [0, offset]");
  const std::int64_t Kt = timer_offset;
  ConservationSubnet s{};
  // Timer for value v: one clock input per step, fires once at t = v.
  s.timer_in = net.add_neuron({.threshold = Kt + 1, .reset = 0, .v0 = Kt - flow_in});
  s.timer_out = net.add_neuron({.threshold = Kt + 1, .reset = 0, .v0 = Kt - flow_out});
  net.add_synapse({clock, s.timer_in, 0, 1});
  net.add_synapse({clock, s.timer_out, 0, 1});
  s.detect_in = net.add_neuron({.threshold = 1, .reset = 0});
  s.detect_out = net.add_neuron({.threshold = 1, .reset = 0});
  net.add_synapse({s.timer_in, s.detect_in, 1, 1});
  net.add_synapse({s.timer_out, s.detect_in, 1, -1});
  net.add_synapse({s.timer_out, s.detect_out, 1, 1});
  net.add_synapse({s.timer_in, s.detect_out, 1, -1});
  // single spike on the first detector spike
  s.E = net.add_neuron({.threshold = 3, .reset = 0, .v0 = 2});
  net.add_synapse({s.detect_in, s.E, 1, 1});
  net.add_synapse({s.detect_out, s.E, 1, 1});
  return s;
}

NaiveDecider build_decider(const FlowNetwork& g, std::int64_t d, NaiveOptions opts) {
  if (d < 0) throw InputError("decision threshold must be non-negative");
  const std::size_t m = g.edge_count();
  std::uint64_t space = 1;
  for (const auto& e : g.edges()) {
    space *= static_cast<std::uint64_t>(e.cap) + 1;
    if (space > opts.guard)
      throw GuardError("candidate flow space exceeds guard " + std::to_string(opts.guard));
  }

  NaiveDecider dec;
  dec.f_max = naive_f_max(g);
  std::int64_t node_sum = 0;
  for (NodeId n = 0; n < g.node_count(); ++n) {
    std::int64_t in = 0, out = 0;
    for (EdgeId e : g.in_edges(n)) in += g.edge(e).cap;
    for (EdgeId e : g.out_edges(n)) out += g.edge(e).cap;
    node_sum = std::max({node_sum, in, out});
  }
  dec.timer_offset = std::max(dec.f_max, node_sum) + 7;
  dec.run_length = dec.f_max + 6;

  auto& net = dec.net;
  const NeuronId clock = add_clock(net);
  dec.reject = net.add_neuron({.threshold = 1, .reset = 0, .role = Role::reject});
  dec.accept = net.add_neuron({.threshold = 1, .reset = 0, .role = Role::accept});
  const NeuronId go = net.add_neuron({.threshold = 1, .reset = 0, .role = Role::scheduled});
  net.schedule(go, dec.f_max + 4);
  net.add_synapse({go, dec.accept, 1, 1});
  net.add_synapse({dec.reject, dec.accept, 1, -2});

  std::vector<NodeId> interior;
  for (NodeId n = 0; n < g.node_count(); ++n)
    if (n != g.source() && n != g.sink()) interior.push_back(n);
  const auto V = static_cast<std::int64_t>(g.node_count());

  // Lexicographic enumeration, edge 0 most significant.
  std::vector<std::int64_t> f(m, 0);
  std::vector<NeuronId> outputs;
  for (bool more = true; more;) {
    if (flow_value(g, f) > d) {
      const NeuronId O = net.add_neuron({.threshold = V + 2, .reset = 0, .v0 = V + 1});
      for (NodeId n : interior) {
        std::int64_t in = 0, out = 0;
        for (EdgeId e : g.in_edges(n)) in += f[e];
        for (EdgeId e : g.out_edges(n)) out += f[e];
        const auto sub = add_conservation_subnet(net, clock, in, out, dec.timer_offset);
        net.add_synapse({sub.E, O, 0, 1});
      }
      outputs.push_back(O);
    }
    more = false;
    for (std::size_t k = m; k-- > 0;) {
      if (f[k] < g.edge(static_cast<EdgeId>(k)).cap) {
        ++f[k];
        std::fill(f.begin() + static_cast<std::ptrdiff_t>(k) + 1, f.end(), 0);
        more = true;
        break;
      }
    }
  }
  dec.candidates = static_cast<std::int64_t>(outputs.size());

  // The reject neuron needs every candidate to fail; once triggered it keeps
  // itself going.
  auto& rej = net.neuron(dec.reject);
  if (outputs.empty()) {
    rej.v0 = 1;
  } else {
    rej.threshold = dec.candidates;
    for (NeuronId O : outputs) net.add_synapse({O, dec.reject, 0, 1});
  }
  net.add_synapse({dec.reject, dec.reject, 1, rej.threshold});
  return dec;
}

NaiveResult decide_naive(const FlowNetwork& g, std::int64_t d, NaiveOptions opts) {
  const NaiveDecider dec = build_decider(g, d, opts);
  Machine machine(8);
  for (const auto& n : dec.net.neurons()) machine.write_neuron(n);
  for (const auto& s : dec.net.synapses()) machine.write_synapse(s);
  for (const auto& f : dec.net.schedule()) machine.write_schedule(f.neuron, f.time);
  const auto c = machine.consult(OracleMode::decider, dec.run_length, "decide");

  NaiveResult r;
  r.accept = c.accepted;
  r.f_max = dec.f_max;
  r.candidates = dec.candidates;
  r.accept_time = machine.read_spike_time(dec.accept);
  r.reject_time = machine.read_spike_time(dec.reject);
  r.neurons = dec.net.size();
  r.synapses = dec.net.synapses().size();
  r.report = machine.report();
  return r;
}

}  // namespace spikeflow
