#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace spikeflow {

using NeuronId = std::uint32_t;

enum class Role : std::uint8_t {
  standard,
  readout,
  scheduled,
  input,
  accept,
  reject,
  transmitter,
  capacity,
};

std::string_view to_string(Role role);
Role parse_role(std::string_view text);  // throws InputError

// Multiplicative leak num/den applied once per timestep (floor of the product).
struct Leak {
  std::int64_t num = 1;
  std::int64_t den = 1;

  bool is_one() const { return num == den; }
  std::int64_t apply(std::int64_t v) const;
  friend bool operator==(const Leak&, const Leak&) = default;
};

struct Neuron {
  std::int64_t threshold = 1;
  std::int64_t reset = 0;
  Leak leak{};
  std::int64_t v0 = 0;
  Role role = Role::standard;
  // Opaque label the controller can read back (edge id for path neurons).
  std::int64_t tag = -1;
};

struct Synapse {
  NeuronId pre = 0;
  NeuronId post = 0;
  std::uint32_t delay = 1;
  std::int64_t weight = 1;
};

struct ScheduledFire {
  NeuronId neuron = 0;
  std::int64_t time = 0;
};

// fixed: V <- reset after a spike.  overflow: V <- V - threshold.
enum class ResetMode : std::uint8_t { fixed, overflow };

// Neuron ids are dense indices in insertion order.
class SpikingNetwork {
 public:
  NeuronId add_neuron(const Neuron& neuron);
  void add_synapse(const Synapse& synapse);  // throws InputError on unknown ids
  void schedule(NeuronId neuron, std::int64_t time);

  // Drops neurons with id >= count along with their synapses and schedule entries.
  void truncate(std::size_t count);

  const std::vector<Neuron>& neurons() const { return neurons_; }
  const std::vector<Synapse>& synapses() const { return synapses_; }
  const std::vector<ScheduledFire>& schedule() const { return schedule_; }
  Neuron& neuron(NeuronId id);
  const Neuron& neuron(NeuronId id) const;
  std::size_t size() const { return neurons_.size(); }

  // neurons + synapses, the oracle space measure.
  std::size_t footprint() const { return neurons_.size() + synapses_.size(); }

  ResetMode reset_mode = ResetMode::fixed;

 private:
  std::vector<Neuron> neurons_;
  std::vector<Synapse> synapses_;
  std::vector<ScheduledFire> schedule_;
};

struct SpikeEvent {
  std::int64_t time = 0;
  NeuronId neuron = 0;
  auto operator<=>(const SpikeEvent&) const = default;
};

struct Delivery {
  NeuronId post;
  std::int64_t weight;
};

// Everything a simulation carries between steps. t is the number of steps
// executed so far, i.e. the time of the next step.
struct SimulationState {
  std::int64_t t = 0;
  std::vector<std::int64_t> potential;
  // pending[k % size] holds deliveries arriving at time k.
  std::vector<std::vector<Delivery>> pending;
  std::vector<SpikeEvent> trace;

  // Neurons whose threshold must be re-examined at the next step even without
  // input (controller writes, fired neurons whose reset sits above threshold).
  std::vector<NeuronId> recheck;

  // Per-step scratch, kept here so stepping does not allocate.
  std::vector<std::uint8_t> mark;
  std::vector<NeuronId> touched;
  std::vector<NeuronId> fired;
};

struct StopCondition {
  enum class Kind : std::uint8_t { exact_step_count, any_fired };
  Kind kind = Kind::exact_step_count;
  std::int64_t steps = 0;
  std::vector<NeuronId> neurons;

  static StopCondition exact_step_count(std::int64_t steps);
  static StopCondition any_of(std::vector<NeuronId> neurons);
};

// Compiled, read-only view of a network. Cheap to step repeatedly; a
// Simulator never mutates its network and may be shared across threads as
// long as every thread owns its own SimulationState.
//
// Step order at time t: scheduled neurons fire; potentials take the leak and
// all delayed arrivals; threshold check; delay-0 deliveries from this step's
// spikes propagate to a fixpoint (each neuron fires at most once per step);
// potentials are clamped at zero.  Neurons whose v0 already meets threshold
// fire at t = 0.
class Simulator {
 public:
  explicit Simulator(const SpikingNetwork& net);

  SimulationState initial_state() const;

  // Advances one step; returns the ids that fired, ascending. The reference
  // points into state and is valid until the next step.
  const std::vector<NeuronId>& step(SimulationState& state) const;

  SimulationState run(std::int64_t max_steps, const StopCondition& stop) const;

  // Continues an existing state; returns when the stop condition holds or
  // state.t reaches max_steps.
  void run(SimulationState& state, std::int64_t max_steps, const StopCondition& stop) const;

  // Additive controller write. throws InputError for an unknown id or a
  // negative result.
  void add_potential(SimulationState& state, NeuronId id, std::int64_t delta) const;

  std::size_t size() const { return threshold_.size(); }

 private:
  struct Out {
    NeuronId post;
    std::uint32_t delay;
    std::int64_t weight;
  };

  void fire(NeuronId id, std::vector<std::int64_t>& v) const;

  ResetMode reset_mode_;
  std::vector<std::int64_t> threshold_;
  std::vector<std::int64_t> reset_;
  std::vector<Leak> leak_;
  std::vector<std::int64_t> v0_;
  bool all_leak_one_ = true;
  // CSR adjacency.
  std::vector<std::size_t> out_begin_;
  std::vector<Out> out_;
  std::vector<ScheduledFire> schedule_;  // sorted by time
  std::uint32_t max_delay_ = 0;
};

// Convenience wrappers over Simulator.
SimulationState run(const SpikingNetwork& net, std::int64_t max_steps, const StopCondition& stop);

// Total spike count of a state's trace.
inline std::int64_t energy(const SimulationState& state) {
  return static_cast<std::int64_t>(state.trace.size());
}

void write_trace_csv(std::ostream& os, const std::vector<SpikeEvent>& trace);

}  // namespace spikeflow
