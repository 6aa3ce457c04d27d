#include "spikeflow/netlist.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "spikeflow/error.hpp"

namespace spikeflow {

namespace {

Leak parse_leak(const std::string& text, std::size_t line) {
  Leak leak;
  try {
    const auto slash = text.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      leak.num = std::stoll(text, &used);
      leak.den = 1;
      if (used != text.size()) throw ParseError("bad leak '" + text + "'", line);
    } else {
      leak.num = std::stoll(text.substr(0, slash), &used);
      leak.den = std::stoll(text.substr(slash + 1));
    }
  } catch (const std::logic_error&) {
    throw ParseError("bad leak '" + text + "'", line);
  }
  if (leak.den <= 0) throw ParseError("leak denominator must be positive", line);
  return leak;
}

}  // namespace

SpikingNetwork parse_netlist(std::istream& in) {
  std::map<long long, Neuron> neurons;
  std::vector<std::pair<Synapse, std::size_t>> synapses;
  std::vector<std::pair<ScheduledFire, std::size_t>> schedule;
  ResetMode mode = ResetMode::fixed;

  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ss(raw);
    std::string kind;
    if (!(ss >> kind)) continue;
    if (kind == "N") {
      long long id;
      Neuron n;
      std::string leak, role;
      if (!(ss >> id >> n.threshold >> n.reset >> leak >> n.v0 >> role))
        throw ParseError("expected: N <id> <threshold> <reset> <leak> <v0> <role>", line);
      if (id < 0) throw ParseError("negative neuron id", line);
      n.leak = parse_leak(leak, line);
      try {
        n.role = parse_role(role);
      } catch (const InputError& e) {
        throw ParseError(e.what(), line);
      }
      if (!neurons.emplace(id, n).second)
        throw ParseError("duplicate neuron id " + std::to_string(id), line);
    } else if (kind == "S") {
      long long pre, post, delay, weight;
      if (!(ss >> pre >> post >> delay >> weight))
        throw ParseError("expected: S <pre> <post> <delay> <weight>", line);
      if (pre < 0 || post < 0 || delay < 0) throw ParseError("negative synapse field", line);
      synapses.push_back({{static_cast<NeuronId>(pre), static_cast<NeuronId>(post),
                           static_cast<std::uint32_t>(delay), weight},
                          line});
    } else if (kind == "SCHED") {
      long long id, time;
      if (!(ss >> id >> time)) throw ParseError("expected: SCHED <id> <time>", line);
      if (id < 0 || time < 0) throw ParseError("negative schedule field", line);
      schedule.push_back({{static_cast<NeuronId>(id), time}, line});
    } else if (kind == "MODE") {
      std::string m;
      if (!(ss >> m) || (m != "fixed" && m != "overflow"))
        throw ParseError("expected: MODE fixed|overflow", line);
      mode = m == "fixed" ? ResetMode::fixed : ResetMode::overflow;
    } else {
      throw ParseError("unknown record '" + kind + "'", line);
    }
    std::string extra;
    if (ss >> extra) throw ParseError("trailing field '" + extra + "'", line);
  }

  SpikingNetwork net;
  net.reset_mode = mode;
  long long expect = 0;
  for (const auto& [id, n] : neurons) {
    if (id != expect) throw ParseError("neuron ids must be 0..n-1; missing " + std::to_string(expect), 0);
    net.add_neuron(n);
    ++expect;
  }
  for (const auto& [s, at] : synapses) {
    try {
      net.add_synapse(s);
    } catch (const InputError& e) {
      throw ParseError(e.what(), at);
    }
  }
  for (const auto& [f, at] : schedule) {
    try {
      net.schedule(f.neuron, f.time);
    } catch (const InputError& e) {
      throw ParseError(e.what(), at);
    }
  }
  return net;
}

void write_netlist(std::ostream& out, const SpikingNetwork& net) {
  if (net.reset_mode == ResetMode::overflow) out << "MODE overflow\n";
  const auto& neurons = net.neurons();
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    const auto& n = neurons[i];
    out << "N " << i << ' ' << n.threshold << ' ' << n.reset << ' ' << n.leak.num;
    if (n.leak.den != 1) out << '/' << n.leak.den;
    out << ' ' << n.v0 << ' ' << to_string(n.role) << '\n';
  }
  for (const auto& s : net.synapses())
    out << "S " << s.pre << ' ' << s.post << ' ' << s.delay << ' ' << s.weight << '\n';
  for (const auto& f : net.schedule()) out << "SCHED " << f.neuron << ' ' << f.time << '\n';
}

}  // namespace spikeflow
