#include "spikeflow/spiking_maxflow.hpp"

#include <algorithm>
#include <unordered_map>

#include "spikeflow/error.hpp"

namespace spikeflow {

namespace {

// working-memory cells
enum Cell : std::size_t { I = 0, J, PREV, MINCAP, TARGET, EVENT, ACC, LITERAL };

}  // namespace

const char* to_string(SolveMode mode) { return mode == SolveMode::paper ? "paper" : "residual"; }

SolveMode parse_solve_mode(const std::string& text) {
  if (text == "paper" || text == "paper-faithful") return SolveMode::paper;
  if (text == "residual") return SolveMode::residual;
  throw InputError("unknown solve mode '" + text + "'");
}

SpikingMaxFlow::SpikingMaxFlow(const FlowNetwork& g, SolveMode mode, SolveOptions opts)
    : g_(g), mode_(mode), opts_(opts), machine_(opts.wm_capacity) {
  map_.m = g.edge_count();
  map_.slots = mode == SolveMode::residual ? 2 * map_.m : map_.m;
  map_.K = static_cast<std::int64_t>(map_.slots) + 1;
}

NodeId SpikingMaxFlow::tail(std::size_t slot) {
  machine_.tick();
  return slot < map_.m ? g_.edge(static_cast<EdgeId>(slot)).u
                       : g_.edge(static_cast<EdgeId>(slot - map_.m)).v;
}

NodeId SpikingMaxFlow::head(std::size_t slot) {
  machine_.tick();
  return slot < map_.m ? g_.edge(static_cast<EdgeId>(slot)).v
                       : g_.edge(static_cast<EdgeId>(slot - map_.m)).u;
}

std::int64_t SpikingMaxFlow::residual_cap(std::size_t slot) {
  if (slot < map_.m) {
    const auto c = map_.C(static_cast<EdgeId>(slot));
    return machine_.read_threshold(c) - machine_.read_voltage(c);
  }
  return machine_.read_voltage(map_.C(static_cast<EdgeId>(slot - map_.m))) - map_.K;
}

void SpikingMaxFlow::build_capacity_neurons() {
  for (std::size_t e = 0; e < map_.m; ++e) {
    machine_.wm_write(I, static_cast<std::int64_t>(e));
    machine_.tick();  // read c(e)
    machine_.write_neuron({.threshold = g_.edge(static_cast<EdgeId>(e)).cap + map_.K,
                           .reset = 0,
                           .v0 = map_.K,
                           .role = Role::capacity,
                           .tag = static_cast<std::int64_t>(e)});
  }
}

void SpikingMaxFlow::build_search_network() {
  const std::int64_t K = map_.K;
  const std::size_t m = map_.m, S = map_.slots;
  machine_.truncate(m);

  const auto next = static_cast<NeuronId>(m);
  map_.rc_base = next;
  if (mode_ == SolveMode::residual) {
    // Reverse capacity neuron: saturated (fires at t = 0) iff f(e) = 0.
    for (std::size_t e = 0; e < m; ++e) {
      machine_.wm_write(I, static_cast<std::int64_t>(e));
      const std::int64_t v = machine_.read_voltage(map_.C(static_cast<EdgeId>(e)));
      machine_.write_neuron({.threshold = v, .reset = 0, .v0 = K, .role = Role::capacity,
                             .tag = static_cast<std::int64_t>(m + e)});
    }
    map_.T = next + static_cast<NeuronId>(m);
  } else {
    map_.T = next;
  }
  machine_.write_neuron({.threshold = 1, .reset = 0, .v0 = 1, .role = Role::transmitter});
  map_.h_base = map_.T + 1;
  map_.r_base = map_.h_base + static_cast<NeuronId>(S);
  map_.path_base = map_.r_base + static_cast<NeuronId>(S);
  for (std::size_t s = 0; s < S; ++s) {
    machine_.wm_write(I, static_cast<std::int64_t>(s));
    machine_.write_neuron({.threshold = K + 1, .reset = 0, .v0 = K,
                           .tag = static_cast<std::int64_t>(s)});
  }
  for (std::size_t s = 0; s < S; ++s) {
    machine_.wm_write(I, static_cast<std::int64_t>(s));
    machine_.write_neuron({.threshold = K + 1, .reset = 0, .v0 = K, .role = Role::readout,
                           .tag = static_cast<std::int64_t>(s)});
  }

  for (std::size_t s = 0; s < S; ++s) {
    machine_.wm_write(I, static_cast<std::int64_t>(s));
    machine_.write_synapse({map_.gate(s), map_.H(s), 0, -K});
    machine_.write_synapse({map_.gate(s), map_.R(s), 0, -K});
    machine_.tick();  // compare
    if (head(s) == g_.sink()) {
      machine_.write_synapse({map_.T, map_.H(s), 1, 1});
      machine_.mark_stop(map_.R(s));
    }
    machine_.tick();
    if (tail(s) == g_.source()) machine_.write_synapse({map_.H(s), map_.R(s), 1, 1});
  }

  // Slot i feeds slot j when i ends where j starts. The search wave runs
  // against the edges, the readout wave along them.
  for (std::size_t i = 0; i < S; ++i) {
    machine_.wm_write(I, static_cast<std::int64_t>(i));
    const NodeId hi = head(i);
    for (std::size_t j = 0; j < S; ++j) {
      machine_.wm_write(J, static_cast<std::int64_t>(j));
      machine_.tick();
      if (hi != tail(j)) continue;
      machine_.write_synapse({map_.H(j), map_.H(i), 1, 1});
      machine_.write_synapse({map_.R(i), map_.R(j), 1, 1});
    }
  }
}

Consultation SpikingMaxFlow::run_search_query() {
  return machine_.consult(OracleMode::transducer, 2 * static_cast<std::int64_t>(map_.slots) + 1,
                          "search");
}

std::optional<std::int64_t> SpikingMaxFlow::decode_path(OutputTape& tape) {
  if (tape.end()) return std::nullopt;

  auto slot_of = [this](NeuronId r) { return static_cast<std::size_t>(r - map_.r_base); };
  auto write_path_neuron = [this](std::size_t slot) {
    const NeuronId p = machine_.write_neuron({.threshold = 1,
                                              .reset = 0,
                                              .v0 = 0,
                                              .role = Role::readout,
                                              .tag = static_cast<std::int64_t>(slot)});
    machine_.write_schedule(p, 0);
  };

  // The earliest readout spike belongs to a source edge of a shortest path
  // with L edges and fires at L + 1. An edge lies on such a path iff its
  // search spike and readout spike add up to 2L + 1.
  const SpikeEvent first = tape.read();
  machine_.wm_write(PREV, static_cast<std::int64_t>(slot_of(first.neuron)));
  machine_.wm_write(TARGET, 2 * first.time - 1);
  machine_.tick();
  if (tail(slot_of(first.neuron)) != g_.source())
    throw InvariantError("first readout spike is not a source edge");
  machine_.wm_write(MINCAP, residual_cap(slot_of(first.neuron)));
  write_path_neuron(slot_of(first.neuron));

  machine_.tick();
  while (head(static_cast<std::size_t>(machine_.wm_read(PREV))) != g_.sink()) {
    machine_.tick();
    if (tape.end()) throw InvariantError("readout tape ended before the path reached the sink");
    const SpikeEvent ev = tape.read();
    const std::size_t slot = slot_of(ev.neuron);
    machine_.wm_write(EVENT, static_cast<std::int64_t>(slot));
    machine_.tick();
    if (tail(slot) != head(static_cast<std::size_t>(machine_.wm_read(PREV)))) continue;
    machine_.tick();
    if (machine_.read_spike_time(map_.H(slot)) + ev.time != machine_.wm_read(TARGET)) continue;
    machine_.wm_write(PREV, static_cast<std::int64_t>(slot));
    const std::int64_t cap = residual_cap(slot);
    machine_.tick();
    if (cap < machine_.wm_read(MINCAP)) machine_.wm_write(MINCAP, cap);
    write_path_neuron(slot);
    machine_.tick();
  }
  machine_.tick();
  if (machine_.wm_read(MINCAP) < 1) throw InvariantError("decoded path has no residual capacity");
  return machine_.wm_read(MINCAP);
}

void SpikingMaxFlow::apply_flow_update(std::int64_t min_cap) {
  machine_.wm_write(MINCAP, min_cap);
  // Every path neuron is scheduled at t = 0; search readouts cannot fire
  // before t = 2, so one step yields exactly the path.
  auto c = machine_.consult(OracleMode::transducer, 1, "path");
  while (!c.tape.end()) {
    const SpikeEvent ev = c.tape.read();
    const std::int64_t slot = machine_.read_tag(ev.neuron);
    machine_.wm_write(EVENT, slot);
    machine_.tick();
    if (slot < static_cast<std::int64_t>(map_.m)) {
      const auto cn = map_.C(static_cast<EdgeId>(slot));
      machine_.tick();
      if (machine_.read_voltage(cn) + machine_.wm_read(MINCAP) > machine_.read_threshold(cn))
        throw InvariantError("flow update would exceed capacity");
      machine_.write_voltage(cn, machine_.wm_read(MINCAP));
    } else {
      const auto cn = map_.C(static_cast<EdgeId>(slot - static_cast<std::int64_t>(map_.m)));
      machine_.tick();
      if (machine_.read_voltage(cn) - machine_.wm_read(MINCAP) < map_.K)
        throw InvariantError("flow cancellation below zero");
      machine_.write_voltage(cn, -machine_.wm_read(MINCAP));
    }
  }
}

FlowAssignment SpikingMaxFlow::read_max_flow() {
  FlowAssignment out;
  out.f.reserve(map_.m);
  machine_.wm_write(ACC, 0);
  machine_.wm_write(LITERAL, 0);
  for (std::size_t e = 0; e < map_.m; ++e) {
    machine_.wm_write(I, static_cast<std::int64_t>(e));
    const std::int64_t v = machine_.read_voltage(map_.C(static_cast<EdgeId>(e)));
    machine_.wm_write(LITERAL, machine_.wm_read(LITERAL) + v);
    out.f.push_back(v - map_.K);  // output tape
    machine_.tick();
    if (tail(e) == g_.source()) machine_.wm_write(ACC, machine_.wm_read(ACC) + v - map_.K);
  }
  out.value = machine_.wm_read(ACC);
  return out;
}

EpisodeStats SpikingMaxFlow::episode_stats(const Consultation& c) const {
  EpisodeStats st;
  st.timesteps = c.record.timesteps;
  st.spikes = c.record.energy;
  std::unordered_map<NeuronId, std::int64_t> count;
  const NeuronId lo = map_.h_base, hi = map_.r_base + static_cast<NeuronId>(map_.slots);
  const auto& neurons = machine_.network().neurons();
  for (const auto& e : machine_.last_trace()) {
    if (e.neuron >= lo && e.neuron < hi)
      st.max_spikes_per_search_neuron = std::max(st.max_spikes_per_search_neuron, ++count[e.neuron]);
    if (st.sink_time < 0 && e.neuron >= map_.r_base && e.neuron < hi) {
      const auto slot = static_cast<std::size_t>(neurons[e.neuron].tag);
      const NodeId h = slot < map_.m ? g_.edge(static_cast<EdgeId>(slot)).v
                                     : g_.edge(static_cast<EdgeId>(slot - map_.m)).u;
      if (h == g_.sink()) st.sink_time = e.time;
    }
  }
  return st;
}

SolveResult SpikingMaxFlow::solve() {
  SolveResult res;
  res.mode = mode_;
  res.K = map_.K;
  res.search_edges = static_cast<std::int64_t>(map_.slots);
  build_capacity_neurons();
  for (;;) {
    if (opts_.max_episodes && res.episodes.size() >= opts_.max_episodes)
      throw GuardError("episode limit reached");
    build_search_network();
    auto c = run_search_query();
    EpisodeStats st = episode_stats(c);
    const auto min_cap = decode_path(c.tape);
    res.peak_neurons = std::max(res.peak_neurons, machine_.network().size());
    if (!min_cap) {
      res.episodes.push_back(std::move(st));
      break;
    }
    st.min_cap = *min_cap;
    const auto& neurons = machine_.network().neurons();
    for (NeuronId p = map_.path_base; p < neurons.size(); ++p) {
      const auto slot = static_cast<std::size_t>(neurons[p].tag);
      st.path.push_back(slot < map_.m ? ResidualArc{static_cast<EdgeId>(slot), true}
                                      : ResidualArc{static_cast<EdgeId>(slot - map_.m), false});
    }
    st.path_length = static_cast<std::int64_t>(st.path.size());
    res.peak_neurons = std::max(res.peak_neurons, machine_.network().size());
    apply_flow_update(*min_cap);
    res.episodes.push_back(std::move(st));
    ++res.augmentations;
  }
  machine_.truncate(map_.m);
  res.flow = read_max_flow();
  res.literal_voltage_sum = machine_.wm_read(LITERAL);
  res.report = machine_.report();
  return res;
}

nlohmann::json SolveResult::to_json() const {
  nlohmann::json flows = nlohmann::json::array();
  for (std::size_t e = 0; e < flow.f.size(); ++e) flows.push_back({e, flow.f[e]});
  nlohmann::json eps = nlohmann::json::array();
  for (const auto& e : episodes) {
    nlohmann::json path = nlohmann::json::array();
    for (const auto& a : e.path) path.push_back({{"edge", a.edge}, {"forward", a.forward}});
    eps.push_back({{"timesteps", e.timesteps},
                   {"spikes", e.spikes},
                   {"sink_time", e.sink_time},
                   {"path_length", e.path_length},
                   {"min_cap", e.min_cap},
                   {"path", path}});
  }
  return {{"mode", to_string(mode)},
          {"value", flow.value},
          {"flows", flows},
          {"episodes", episodes.size()},
          {"augmentations", augmentations},
          {"K", K},
          {"search_edges", search_edges},
          {"literal_voltage_sum", literal_voltage_sum},
          {"peak_neurons", peak_neurons},
          {"episode_detail", eps},
          {"report", report.to_json()}};
}

SolveResult solve(const FlowNetwork& g, SolveMode mode, SolveOptions opts) {
  return SpikingMaxFlow(g, mode, opts).solve();
}

}  // namespace spikeflow
