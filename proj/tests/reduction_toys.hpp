#pragma once

#include <vector>

#include "spikeflow/tnfr.hpp"

namespace spikeflow::toys {

// Network with constant, accept and reject neurons (ids 0, 1, 2) and `extra`
// standard neurons after them.
inline ReductionConfig base(std::int64_t t, std::int64_t e, std::int64_t th_acc = 1,
                     std::int64_t th_rej = 1, std::vector<std::int64_t> extra = {}) {
  ReductionConfig cfg;
  cfg.t = t;
  cfg.e = e;
  cfg.snn.reset_mode = ResetMode::overflow;
  cfg.snn.add_neuron({.threshold = 1, .role = Role::input});
  cfg.snn.add_neuron({.threshold = th_acc, .role = Role::accept});
  cfg.snn.add_neuron({.threshold = th_rej, .role = Role::reject});
  for (auto th : extra) cfg.snn.add_neuron({.threshold = th});
  return cfg;
}

constexpr NeuronId C = 0, ACC = 1, REJ = 2, X = 3;

struct Toy {
  const char* name;
  ReductionConfig cfg;
  bool accepts;
};

inline std::vector<Toy> toy_suite() {
  std::vector<Toy> toys;
  {
    auto c = base(2, 4);
    c.snn.add_synapse({C, ACC, 0, 1});
    toys.push_back({"accept_each_step", c, true});
    c.e = 2;
    toys.push_back({"energy_exceeded", c, false});
  }
  {
    auto c = base(2, 4);
    c.snn.add_synapse({C, REJ, 0, 1});
    toys.push_back({"never_accepts", c, false});
    c.e = 1;
    c.t = 3;
    toys.push_back({"both_bounds_fail", c, false});
  }
  {
    auto c = base(3, 9, 1, 1, {2});
    c.snn.add_synapse({C, X, 0, 2});
    c.snn.add_synapse({X, ACC, 0, 1});
    toys.push_back({"relay_same_step", c, true});
  }
  {
    auto c = base(3, 6, 3, 1, {1});
    c.snn.add_synapse({C, ACC, 0, 3});
    c.snn.add_synapse({ACC, X, 1, 1});
    toys.push_back({"top_up_and_remainder", c, true});
  }
  {
    auto c = base(3, 5, 2, 1, {2});
    c.snn.add_synapse({C, ACC, 0, 2});
    c.snn.add_synapse({C, X, 0, 1});
    c.snn.add_synapse({X, ACC, 1, 1});
    toys.push_back({"carried_potential", c, true});
    c.e = 4;
    toys.push_back({"carried_potential_tight", c, false});
  }
  return toys;
}

}  // namespace spikeflow::toys
