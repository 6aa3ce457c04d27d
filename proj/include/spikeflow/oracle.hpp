#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spikeflow/snn.hpp"

namespace spikeflow {

// One oracle consultation as seen by the resource accounting.
struct ConsultationRecord {
  std::string label;
  std::int64_t timesteps = 0;
  std::int64_t space = 0;   // neurons + synapses at consultation time
  std::int64_t energy = 0;  // spikes
};

// Append-only resource account of a controller/oracle pair.
struct ResourceReport {
  std::int64_t controller_time = 0;
  std::int64_t controller_wm_peak = 0;
  std::vector<ConsultationRecord> consultations;

  std::int64_t oracle_time() const;    // max over consultations
  std::int64_t oracle_space() const;   // max over consultations
  std::int64_t oracle_energy() const;  // sum over consultations

  nlohmann::json to_json() const;
};

// Bounded read/write tape of the controller. Cells are addressed by index.
class WorkingMemory {
 public:
  explicit WorkingMemory(std::size_t capacity) : cells_(capacity, 0) {}

  void write(std::size_t cell, std::int64_t value);  // throws WorkingMemoryError
  std::int64_t read(std::size_t cell) const;
  std::size_t capacity() const { return cells_.size(); }
  std::size_t peak() const { return peak_; }

 private:
  std::vector<std::int64_t> cells_;
  std::size_t peak_ = 0;
};

// Time-ordered spike events of readout/accept/reject neurons with a
// forward-only cursor. Every read/end query costs one controller step when a
// report is attached.
class OutputTape {
 public:
  OutputTape() = default;
  explicit OutputTape(std::vector<SpikeEvent> events, ResourceReport* meter = nullptr);

  bool end() const;
  SpikeEvent read();  // throws InputError past the end

  const std::vector<SpikeEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

 private:
  std::vector<SpikeEvent> events_;
  std::size_t cursor_ = 0;
  ResourceReport* meter_ = nullptr;
};

enum class OracleMode : std::uint8_t { transducer, decider };

struct Consultation {
  OutputTape tape;
  bool accepted = false;  // decider mode only
  ConsultationRecord record;
};

// A conventional controller coupled to a neuromorphic oracle. Every
// communication with the oracle, every input-tape read, every comparison and
// every working-memory write costs one controller step.
//
// The oracle keeps one network. Potentials written by the controller are the
// starting potentials of the next consultation; a consultation never changes
// them, so a neuron reset during a run is back at its written value when the
// next run starts.
class Machine {
 public:
  explicit Machine(std::size_t wm_capacity = 8) : wm_(wm_capacity) {}

  // controller-side metering
  void tick(std::int64_t ops = 1) { report_.controller_time += ops; }
  void wm_write(std::size_t cell, std::int64_t value);
  std::int64_t wm_read(std::size_t cell) const { return wm_.read(cell); }
  const WorkingMemory& wm() const { return wm_; }

  // communication with the oracle
  NeuronId write_neuron(const Neuron& neuron);
  void write_synapse(const Synapse& synapse);
  void write_schedule(NeuronId neuron, std::int64_t time);
  void mark_stop(NeuronId neuron);
  void truncate(std::size_t count);
  void write_voltage(NeuronId neuron, std::int64_t delta);  // additive
  std::int64_t read_voltage(NeuronId neuron);
  std::int64_t read_threshold(NeuronId neuron);
  std::int64_t read_tag(NeuronId neuron);
  // First spike time of a neuron in the latest consultation, -1 if silent.
  std::int64_t read_spike_time(NeuronId neuron);

  // Runs the network for at most time_limit steps. Transducer mode stops
  // early once any marked stop neuron fired. Decider mode stops at the first
  // accept or reject spike; throws UndecidedError when neither fires.
  Consultation consult(OracleMode mode, std::int64_t time_limit, std::string label = {});

  const SpikingNetwork& network() const { return net_; }
  SpikingNetwork& network() { return net_; }
  const ResourceReport& report() const { return report_; }
  ResourceReport& report() { return report_; }
  // Full trace of the latest consultation; diagnostics only, not visible to
  // the controller's algorithm.
  const std::vector<SpikeEvent>& last_trace() const { return last_trace_; }

 private:
  SpikingNetwork net_;
  std::vector<NeuronId> stop_;
  ResourceReport report_;
  WorkingMemory wm_;
  std::vector<std::int64_t> first_spike_;
  std::vector<SpikeEvent> last_trace_;
};

}  // namespace spikeflow
