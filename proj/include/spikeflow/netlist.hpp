#pragma once

#include <iosfwd>

#include "spikeflow/snn.hpp"

namespace spikeflow {

// Line-oriented netlist:
//   N <id> <threshold> <reset> <leak> <v0> <role>     leak is "p" or "p/q"
//   S <pre> <post> <delay> <weight>
//   SCHED <id> <time>
//   MODE fixed|overflow                                reset rule, default fixed
//   # comment
// Neuron ids must cover 0..n-1 exactly once (any order). throws ParseError.
SpikingNetwork parse_netlist(std::istream& in);

void write_netlist(std::ostream& out, const SpikingNetwork& net);

}  // namespace spikeflow
