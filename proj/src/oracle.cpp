#include "spikeflow/oracle.hpp"

#include <algorithm>
#include <utility>

#include "spikeflow/error.hpp"

namespace spikeflow {

std::int64_t ResourceReport::oracle_time() const {
  std::int64_t m = 0;
  for (const auto& c : consultations) m = std::max(m, c.timesteps);
  return m;
}

std::int64_t ResourceReport::oracle_space() const {
  std::int64_t m = 0;
  for (const auto& c : consultations) m = std::max(m, c.space);
  return m;
}

std::int64_t ResourceReport::oracle_energy() const {
  std::int64_t s = 0;
  for (const auto& c : consultations) s += c.energy;
  return s;
}

nlohmann::json ResourceReport::to_json() const {
  nlohmann::json labels = nlohmann::json::array(), times = nlohmann::json::array(),
                 spaces = nlohmann::json::array(), energies = nlohmann::json::array();
  for (const auto& c : consultations) {
    labels.push_back(c.label);
    times.push_back(c.timesteps);
    spaces.push_back(c.space);
    energies.push_back(c.energy);
  }
  return {
      {"controller_time", controller_time},
      {"controller_wm_peak", controller_wm_peak},
      {"oracle_time", oracle_time()},
      {"oracle_space", oracle_space()},
      {"oracle_energy", oracle_energy()},
      {"consultations",
       {{"label", labels}, {"timesteps", times}, {"space", spaces}, {"energy", energies}}},
  };
}

void WorkingMemory::write(std::size_t cell, std::int64_t value) {
  if (cell >= cells_.size())
    throw WorkingMemoryError("working memory cell " + std::to_string(cell) +
                             " beyond capacity " + std::to_string(cells_.size()));
  cells_[cell] = value;
  peak_ = std::max(peak_, cell + 1);
}

std::int64_t WorkingMemory::read(std::size_t cell) const {
  if (cell >= cells_.size())
    throw WorkingMemoryError("working memory cell " + std::to_string(cell) +
                             " beyond capacity " + std::to_string(cells_.size()));
  return cells_[cell];
}

OutputTape::OutputTape(std::vector<SpikeEvent> events, ResourceReport* meter)
    : events_(std::move(events)), meter_(meter) {
  std::sort(events_.begin(), events_.end());
}

bool OutputTape::end() const {
  if (meter_) ++meter_->controller_time;
  return cursor_ >= events_.size();
}

SpikeEvent OutputTape::read() {
  if (meter_) ++meter_->controller_time;
  if (cursor_ >= events_.size()) throw InputError("read past the end of the output tape");
  return events_[cursor_++];
}

void Machine::wm_write(std::size_t cell, std::int64_t value) {
  tick();
  wm_.write(cell, value);
  report_.controller_wm_peak =
      std::max(report_.controller_wm_peak, static_cast<std::int64_t>(wm_.peak()));
}

NeuronId Machine::write_neuron(const Neuron& neuron) {
  tick();
  return net_.add_neuron(neuron);
}

void Machine::write_synapse(const Synapse& synapse) {
  tick();
  net_.add_synapse(synapse);
}

void Machine::write_schedule(NeuronId neuron, std::int64_t time) {
  tick();
  net_.schedule(neuron, time);
}

void Machine::mark_stop(NeuronId neuron) {
  tick();
  if (neuron >= net_.size()) throw InputError("unknown neuron " + std::to_string(neuron));
  stop_.push_back(neuron);
}

void Machine::truncate(std::size_t count) {
  tick();
  net_.truncate(count);
  std::erase_if(stop_, [count](NeuronId id) { return id >= count; });
}

void Machine::write_voltage(NeuronId neuron, std::int64_t delta) {
  tick();
  auto& n = net_.neuron(neuron);
  if (n.v0 + delta < 0)
    throw InputError("write would make potential of neuron " + std::to_string(neuron) +
                     " negative");
  n.v0 += delta;
}

std::int64_t Machine::read_voltage(NeuronId neuron) {
  tick();
  return net_.neuron(neuron).v0;
}

std::int64_t Machine::read_threshold(NeuronId neuron) {
  tick();
  return net_.neuron(neuron).threshold;
}

std::int64_t Machine::read_tag(NeuronId neuron) {
  tick();
  return net_.neuron(neuron).tag;
}

std::int64_t Machine::read_spike_time(NeuronId neuron) {
  tick();
  if (neuron >= net_.size()) throw InputError("unknown neuron " + std::to_string(neuron));
  return neuron < first_spike_.size() ? first_spike_[neuron] : -1;
}

Consultation Machine::consult(OracleMode mode, std::int64_t time_limit, std::string label) {
  if (time_limit < 1) throw InputError("consultation time limit must be >= 1");
  tick();
  const Simulator sim(net_);
  const auto& neurons = net_.neurons();

  StopCondition stop = StopCondition::exact_step_count(time_limit);
  if (mode == OracleMode::decider) {
    std::vector<NeuronId> verdict;
    for (NeuronId id = 0; id < neurons.size(); ++id)
      if (neurons[id].role == Role::accept || neurons[id].role == Role::reject)
        verdict.push_back(id);
    stop = StopCondition::any_of(std::move(verdict));
  } else if (!stop_.empty()) {
    stop = StopCondition::any_of(stop_);
  }
  SimulationState state = sim.run(time_limit, stop);

  Consultation result;
  std::vector<SpikeEvent> tape;
  first_spike_.assign(neurons.size(), -1);
  bool accept_seen = false, reject_seen = false;
  for (const auto& e : state.trace) {
    if (first_spike_[e.neuron] < 0) first_spike_[e.neuron] = e.time;
    const Role r = neurons[e.neuron].role;
    if (r == Role::readout || r == Role::accept || r == Role::reject) tape.push_back(e);
    if (r == Role::accept) accept_seen = true;
    if (r == Role::reject) reject_seen = true;
  }
  if (mode == OracleMode::decider) {
    if (!accept_seen && !reject_seen)
      throw UndecidedError("decider consultation ended after " + std::to_string(state.t) +
                           " steps with no verdict");
    // A reject spike in the same step as the accept spike wins.
    result.accepted = accept_seen && !reject_seen;
  }
  result.record = {std::move(label), state.t, static_cast<std::int64_t>(net_.footprint()),
                   energy(state)};
  report_.consultations.push_back(result.record);
  result.tape = OutputTape(std::move(tape), &report_);
  last_trace_ = std::move(state.trace);
  return result;
}

}  // namespace spikeflow
