#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "spikeflow/flow.hpp"
#include "spikeflow/oracle.hpp"

namespace spikeflow {

// paper: search over the original edges only (no flow cancellation).
// residual: every edge e also gets a reverse slot with capacity f(e).
enum class SolveMode : std::uint8_t { paper, residual };

const char* to_string(SolveMode mode);
SolveMode parse_solve_mode(const std::string& text);  // throws InputError

// Neuron layout of one search episode. Slot s < m is edge s; slot m + e is
// the reverse of edge e (residual mode only).
//
//   [0, m)                 C_e   capacity neurons, persistent
//   [rc_base, rc_base+m)   reverse capacity neurons (residual mode)
//   T                      transmitter
//   [h_base, h_base+S)     H search neurons
//   [r_base, r_base+S)     R readout neurons
//   [path_base, ...)       path neurons written while decoding
struct EdgeNeuronMap {
  std::size_t m = 0;
  std::size_t slots = 0;
  std::int64_t K = 0;
  NeuronId rc_base = 0;
  NeuronId T = 0;
  NeuronId h_base = 0;
  NeuronId r_base = 0;
  NeuronId path_base = 0;

  NeuronId C(EdgeId e) const { return e; }
  NeuronId H(std::size_t slot) const { return h_base + static_cast<NeuronId>(slot); }
  NeuronId R(std::size_t slot) const { return r_base + static_cast<NeuronId>(slot); }
  // Capacity neuron that gates a slot.
  NeuronId gate(std::size_t slot) const {
    return slot < m ? static_cast<NeuronId>(slot) : rc_base + static_cast<NeuronId>(slot - m);
  }
};

// Diagnostics of one search query, taken from the oracle trace. None of
// this is visible to the controller's algorithm.
struct EpisodeStats {
  std::int64_t timesteps = 0;
  std::int64_t spikes = 0;
  std::int64_t sink_time = -1;  // first sink-edge readout spike, -1 if none
  std::int64_t path_length = 0;
  std::int64_t min_cap = 0;
  std::int64_t max_spikes_per_search_neuron = 0;  // over all H and R neurons
  std::vector<ResidualArc> path;
};

struct SolveOptions {
  std::size_t wm_capacity = 8;
  std::size_t max_episodes = 0;  // 0 = unlimited
};

struct SolveResult {
  SolveMode mode = SolveMode::paper;
  FlowAssignment flow;
  ResourceReport report;
  std::vector<EpisodeStats> episodes;  // one per search query
  std::size_t augmentations = 0;
  std::int64_t K = 0;
  std::int64_t search_edges = 0;  // |E| or 2|E|
  // Sum of all capacity-neuron potentials, offsets included.
  std::int64_t literal_voltage_sum = 0;
  std::size_t peak_neurons = 0;  // largest oracle network over the run

  nlohmann::json to_json() const;
};

// Controller for the spiking Edmonds-Karp loop. The graph is the read-only
// input tape: each tail/head/capacity lookup costs one controller step.
// Everything the controller remembers between oracle calls lives in at most
// eight working-memory cells.
class SpikingMaxFlow {
 public:
  SpikingMaxFlow(const FlowNetwork& g, SolveMode mode, SolveOptions opts = {});

  // Writes C_e = (c(e) + K, 0, 1) with potential K for every edge.
  void build_capacity_neurons();
  // Discards the previous episode and writes T, H, R and their synapses for
  // the current flow.
  void build_search_network();
  // Runs until a sink-edge readout spikes or 2S+1 steps pass.
  Consultation run_search_query();
  // Scans the tape and writes one scheduled path neuron per accepted slot.
  // Returns the bottleneck capacity, or nullopt when the tape is empty.
  std::optional<std::int64_t> decode_path(OutputTape& tape);
  // Replays the path neurons and pushes min_cap along them.
  void apply_flow_update(std::int64_t min_cap);
  // Flow per edge from the capacity neurons; value is the source outflow.
  FlowAssignment read_max_flow();

  SolveResult solve();

  const EdgeNeuronMap& layout() const { return map_; }
  Machine& machine() { return machine_; }

 private:
  // input tape
  NodeId tail(std::size_t slot);
  NodeId head(std::size_t slot);
  std::int64_t residual_cap(std::size_t slot);  // via the oracle
  EpisodeStats episode_stats(const Consultation& c) const;

  FlowNetwork g_;
  SolveMode mode_;
  SolveOptions opts_;
  Machine machine_;
  EdgeNeuronMap map_;
};

SolveResult solve(const FlowNetwork& g, SolveMode mode, SolveOptions opts = {});

}  // namespace spikeflow
