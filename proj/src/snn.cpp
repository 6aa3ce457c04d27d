#include "spikeflow/snn.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <string>
#include <utility>

#include "spikeflow/error.hpp"

namespace spikeflow {

namespace {

constexpr std::array<std::pair<Role, std::string_view>, 8> kRoleNames{{
    {Role::standard, "standard"},
    {Role::readout, "readout"},
    {Role::scheduled, "scheduled"},
    {Role::input, "input"},
    {Role::accept, "accept"},
    {Role::reject, "reject"},
    {Role::transmitter, "transmitter"},
    {Role::capacity, "capacity"},
}};

// mark bits
constexpr std::uint8_t kTouched = 1;
constexpr std::uint8_t kFired = 2;

}  // namespace

std::string_view to_string(Role role) {
  for (const auto& [r, name] : kRoleNames)
    if (r == role) return name;
  return "standard";
}

Role parse_role(std::string_view text) {
  for (const auto& [r, name] : kRoleNames)
    if (name == text) return r;
  throw InputError("unknown neuron role '" + std::string(text) + "'");
}

std::int64_t Leak::apply(std::int64_t v) const {
  if (num == den) return v;
  if (num == 0) return 0;
  const std::int64_t prod = v * num;
  std::int64_t q = prod / den;
  if ((prod % den != 0) && ((prod < 0) != (den < 0))) --q;
  return q;
}

NeuronId SpikingNetwork::add_neuron(const Neuron& neuron) {
  if (neuron.leak.den == 0) throw InputError("leak denominator is zero");
  neurons_.push_back(neuron);
  return static_cast<NeuronId>(neurons_.size() - 1);
}

void SpikingNetwork::add_synapse(const Synapse& synapse) {
  if (synapse.pre >= neurons_.size() || synapse.post >= neurons_.size())
    throw InputError("synapse references unknown neuron " +
                     std::to_string(std::max(synapse.pre, synapse.post)));
  synapses_.push_back(synapse);
}

void SpikingNetwork::schedule(NeuronId neuron, std::int64_t time) {
  if (neuron >= neurons_.size())
    throw InputError("schedule references unknown neuron " + std::to_string(neuron));
  if (time < 0) throw InputError("negative schedule time");
  schedule_.push_back({neuron, time});
}

void SpikingNetwork::truncate(std::size_t count) {
  if (count >= neurons_.size()) return;
  neurons_.resize(count);
  std::erase_if(synapses_, [count](const Synapse& s) { return s.pre >= count || s.post >= count; });
  std::erase_if(schedule_, [count](const ScheduledFire& f) { return f.neuron >= count; });
}

Neuron& SpikingNetwork::neuron(NeuronId id) {
  if (id >= neurons_.size()) throw InputError("unknown neuron " + std::to_string(id));
  return neurons_[id];
}

const Neuron& SpikingNetwork::neuron(NeuronId id) const {
  if (id >= neurons_.size()) throw InputError("unknown neuron " + std::to_string(id));
  return neurons_[id];
}

StopCondition StopCondition::exact_step_count(std::int64_t steps) {
  StopCondition s;
  s.kind = Kind::exact_step_count;
  s.steps = steps;
  return s;
}

StopCondition StopCondition::any_of(std::vector<NeuronId> neurons) {
  StopCondition s;
  s.kind = Kind::any_fired;
  s.neurons = std::move(neurons);
  return s;
}

Simulator::Simulator(const SpikingNetwork& net) : reset_mode_(net.reset_mode) {
  const auto& neurons = net.neurons();
  const std::size_t n = neurons.size();
  threshold_.reserve(n);
  reset_.reserve(n);
  leak_.reserve(n);
  v0_.reserve(n);
  for (const auto& nr : neurons) {
    threshold_.push_back(nr.threshold);
    reset_.push_back(nr.reset);
    leak_.push_back(nr.leak);
    v0_.push_back(nr.v0);
    all_leak_one_ = all_leak_one_ && nr.leak.is_one();
  }

  out_begin_.assign(n + 1, 0);
  for (const auto& s : net.synapses()) ++out_begin_[s.pre + 1];
  for (std::size_t i = 0; i < n; ++i) out_begin_[i + 1] += out_begin_[i];
  out_.resize(net.synapses().size());
  std::vector<std::size_t> cursor(out_begin_.begin(), out_begin_.end() - 1);
  for (const auto& s : net.synapses()) {
    out_[cursor[s.pre]++] = {s.post, s.delay, s.weight};
    max_delay_ = std::max(max_delay_, s.delay);
  }

  schedule_ = net.schedule();
  std::stable_sort(schedule_.begin(), schedule_.end(),
                   [](const ScheduledFire& a, const ScheduledFire& b) { return a.time < b.time; });
}

SimulationState Simulator::initial_state() const {
  SimulationState state;
  state.potential = v0_;
  state.pending.resize(static_cast<std::size_t>(max_delay_) + 1);
  state.mark.assign(threshold_.size(), 0);
  return state;
}

void Simulator::fire(NeuronId id, std::vector<std::int64_t>& v) const {
  if (reset_mode_ == ResetMode::fixed)
    v[id] = reset_[id];
  else
    v[id] -= threshold_[id];
}

const std::vector<NeuronId>& Simulator::step(SimulationState& state) const {
  const std::int64_t t = state.t;
  auto& v = state.potential;
  auto& mark = state.mark;
  auto& touched = state.touched;
  auto& fired = state.fired;
  touched.clear();
  fired.clear();

  auto touch = [&](NeuronId id) {
    if (!(mark[id] & kTouched)) {
      mark[id] |= kTouched;
      touched.push_back(id);
    }
  };

  // (1) scheduled fires
  auto [sb, se] = std::equal_range(
      schedule_.begin(), schedule_.end(), ScheduledFire{0, t},
      [](const ScheduledFire& a, const ScheduledFire& b) { return a.time < b.time; });
  for (auto it = sb; it != se; ++it) {
    if (mark[it->neuron] & kFired) continue;
    mark[it->neuron] |= kFired;
    fired.push_back(it->neuron);
    touch(it->neuron);
  }

  // (2) leak and delayed arrivals
  const bool full_scan = !all_leak_one_ || t == 0;
  if (t > 0 && !all_leak_one_)
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = leak_[i].apply(v[i]);
  auto& slot = state.pending[static_cast<std::size_t>(t) % state.pending.size()];
  for (const auto& d : slot) {
    v[d.post] += d.weight;
    touch(d.post);
  }
  slot.clear();
  for (NeuronId id : state.recheck) touch(id);
  state.recheck.clear();

  for (NeuronId id : fired) fire(id, v);

  // (3) threshold check
  auto check = [&](NeuronId id) {
    if (!(mark[id] & kFired) && v[id] >= threshold_[id]) {
      mark[id] |= kFired;
      fired.push_back(id);
      fire(id, v);
    }
  };
  if (full_scan) {
    for (NeuronId id = 0; id < v.size(); ++id) check(id);
  } else {
    for (std::size_t i = 0; i < touched.size(); ++i) check(touched[i]);
  }

  // (4)+(5) propagate; delay-0 deliveries may trigger further same-step fires
  for (std::size_t i = 0; i < fired.size(); ++i) {
    const NeuronId pre = fired[i];
    touch(pre);
    for (std::size_t k = out_begin_[pre]; k < out_begin_[pre + 1]; ++k) {
      const Out& o = out_[k];
      if (o.delay == 0) {
        v[o.post] += o.weight;
        touch(o.post);
        check(o.post);
      } else {
        state.pending[static_cast<std::size_t>(t + o.delay) % state.pending.size()].push_back(
            {o.post, o.weight});
      }
    }
  }

  // (6) clamp
  if (full_scan) {
    for (auto& x : v) x = std::max<std::int64_t>(x, 0);
  } else {
    for (NeuronId id : touched) v[id] = std::max<std::int64_t>(v[id], 0);
  }

  std::sort(fired.begin(), fired.end());
  for (NeuronId id : fired) {
    state.trace.push_back({t, id});
    if (v[id] >= threshold_[id]) state.recheck.push_back(id);
  }
  for (NeuronId id : touched) mark[id] = 0;
  for (NeuronId id : fired) mark[id] = 0;
  state.t = t + 1;
  return fired;
}

void Simulator::run(SimulationState& state, std::int64_t max_steps,
                    const StopCondition& stop) const {
  std::int64_t limit = max_steps;
  if (stop.kind == StopCondition::Kind::exact_step_count) limit = std::min(limit, stop.steps);
  std::vector<std::uint8_t> watched;
  if (stop.kind == StopCondition::Kind::any_fired) {
    watched.assign(threshold_.size(), 0);
    for (NeuronId id : stop.neurons)
      if (id < watched.size()) watched[id] = 1;
  }
  while (state.t < limit) {
    const auto& fired = step(state);
    if (stop.kind == StopCondition::Kind::any_fired &&
        std::any_of(fired.begin(), fired.end(), [&](NeuronId id) { return watched[id] != 0; }))
      return;
  }
}

SimulationState Simulator::run(std::int64_t max_steps, const StopCondition& stop) const {
  SimulationState state = initial_state();
  run(state, max_steps, stop);
  return state;
}

void Simulator::add_potential(SimulationState& state, NeuronId id, std::int64_t delta) const {
  if (id >= state.potential.size()) throw InputError("unknown neuron " + std::to_string(id));
  if (state.potential[id] + delta < 0)
    throw InputError("write would make potential of neuron " + std::to_string(id) + " negative");
  state.potential[id] += delta;
  state.recheck.push_back(id);
}

SimulationState run(const SpikingNetwork& net, std::int64_t max_steps, const StopCondition& stop) {
  return Simulator(net).run(max_steps, stop);
}

void write_trace_csv(std::ostream& os, const std::vector<SpikeEvent>& trace) {
  os << "time,neuron_id\n";
  for (const auto& e : trace) os << e.time << ',' << e.neuron << '\n';
}

}  // namespace spikeflow
