#pragma once

#include <cstdint>

#include "spikeflow/flow.hpp"
#include "spikeflow/oracle.hpp"
#include "spikeflow/snn.hpp"

namespace spikeflow {

// Largest value any conservation timer has to count to: the largest edge
// capacity, or the largest min(total in-capacity, total out-capacity) of an
// interior node when that is bigger.
std::int64_t naive_f_max(const FlowNetwork& g);

// Comparison circuit for one node and one candidate flow. Two timers fire at
// t = flow_in and t = flow_out (driven by `clock`, which must fire every step
// from t = 0); two one-sided detectors see a timer spike that is not matched
// by the other timer in the same step; E fires at min(flow_in, flow_out) + 2
// iff the two differ. timer_offset must exceed the run length.
struct ConservationSubnet {
  NeuronId timer_in, timer_out, detect_in, detect_out, E;
};
ConservationSubnet add_conservation_subnet(SpikingNetwork& net, NeuronId clock,
                                           std::int64_t flow_in, std::int64_t flow_out,
                                           std::int64_t timer_offset);

// Neuron that fires at t = 0, 1, 2, ...
NeuronId add_clock(SpikingNetwork& net);

struct NaiveDecider {
  SpikingNetwork net;
  NeuronId accept = 0;
  NeuronId reject = 0;
  std::int64_t f_max = 0;
  std::int64_t candidates = 0;      // |F|, candidate flows with outflow > d
  std::int64_t run_length = 0;      // steps the decider needs
  std::int64_t timer_offset = 0;
};

struct NaiveOptions {
  std::uint64_t guard = 4096;  // max number of joint assignments prod(c(e)+1)
};

// throws GuardError when the assignment space exceeds the guard.
NaiveDecider build_decider(const FlowNetwork& g, std::int64_t d, NaiveOptions opts = {});

struct NaiveResult {
  bool accept = false;
  std::int64_t f_max = 0;
  std::int64_t candidates = 0;
  std::int64_t accept_time = -1;  // spike time of the accept neuron
  std::int64_t reject_time = -1;
  std::size_t neurons = 0;
  std::size_t synapses = 0;
  ResourceReport report;
};

// One decider consultation (pre-processing model).
NaiveResult decide_naive(const FlowNetwork& g, std::int64_t d, NaiveOptions opts = {});

}  // namespace spikeflow
