#include <gtest/gtest.h>

#include "spikeflow/error.hpp"
#include "spikeflow/spiking_maxflow.hpp"

using namespace spikeflow;

namespace {

FlowNetwork chain(std::vector<std::int64_t> caps) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < caps.size(); ++i)
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1), caps[i]});
  return FlowNetwork(caps.size() + 1, 0, static_cast<NodeId>(caps.size()), edges);
}

FlowNetwork diamond() {
  return FlowNetwork(4, 0, 3, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}});
}

FlowNetwork trap() {
  return FlowNetwork(6, 0, 5,
                     {{0, 1, 1}, {1, 2, 1}, {2, 5, 1}, {0, 3, 1}, {3, 2, 1}, {1, 4, 1}, {4, 5, 1}});
}

bool has_synapse(const SpikingNetwork& net, NeuronId pre, NeuronId post, std::uint32_t d,
                 std::int64_t w) {
  for (const auto& s : net.synapses())
    if (s.pre == pre && s.post == post && s.delay == d && s.weight == w) return true;
  return false;
}

}  // namespace

TEST(SpikingMaxFlow, CapacityNeurons) {
  const FlowNetwork g(5, 0, 4, {{0, 1, 3}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
  SpikingMaxFlow s(g, SolveMode::paper);
  s.build_capacity_neurons();
  const auto& c = s.machine().network().neuron(0);
  EXPECT_EQ(c.threshold, 8);
  EXPECT_EQ(c.v0, 5);
  s.machine().write_voltage(0, 3);
  EXPECT_EQ(s.machine().network().neuron(0).v0, 8);

  SpikingMaxFlow one(chain({1}), SolveMode::paper);
  one.build_capacity_neurons();
  EXPECT_EQ(one.machine().network().neuron(0).threshold, 3);
  EXPECT_EQ(one.machine().network().neuron(0).v0, 2);
}

TEST(SpikingMaxFlow, ChainSearchNetworkWiring) {
  const auto g = chain({3, 5});
  SpikingMaxFlow s(g, SolveMode::paper);
  s.build_capacity_neurons();
  s.build_search_network();
  const auto& L = s.layout();
  const auto& net = s.machine().network();
  EXPECT_EQ(L.K, 3);
  EXPECT_EQ(net.neuron(L.H(0)).threshold, 4);
  EXPECT_EQ(net.neuron(L.H(0)).v0, 3);
  EXPECT_TRUE(has_synapse(net, L.H(1), L.H(0), 1, 1));
  EXPECT_TRUE(has_synapse(net, L.T, L.H(1), 1, 1));
  EXPECT_TRUE(has_synapse(net, L.R(0), L.R(1), 1, 1));
  EXPECT_TRUE(has_synapse(net, L.H(0), L.R(0), 1, 1));
  EXPECT_TRUE(has_synapse(net, L.C(0), L.H(0), 0, -3));
  EXPECT_TRUE(has_synapse(net, L.C(1), L.R(1), 0, -3));
  EXPECT_EQ(net.size(), 2u + 1u + 4u);
}

TEST(SpikingMaxFlow, ChainQueryTapeAndDecode) {
  const auto g = chain({3, 5});
  SpikingMaxFlow s(g, SolveMode::paper);
  s.build_capacity_neurons();
  s.build_search_network();
  auto c = s.run_search_query();
  const auto& L = s.layout();
  const std::vector<SpikeEvent> expected{{3, L.R(0)}, {4, L.R(1)}};
  EXPECT_EQ(c.tape.events(), expected);
  EXPECT_EQ(c.record.timesteps, 5);
  EXPECT_EQ(c.record.energy, 5);
  const auto min_cap = s.decode_path(c.tape);
  ASSERT_TRUE(min_cap.has_value());
  EXPECT_EQ(*min_cap, 3);
  s.apply_flow_update(*min_cap);
  EXPECT_EQ(s.machine().network().neuron(0).v0, 6);
  EXPECT_EQ(s.machine().network().neuron(1).v0, 6);
  s.build_search_network();
  auto again = s.run_search_query();
  EXPECT_TRUE(again.tape.events().empty());
  EXPECT_EQ(again.record.timesteps, 5);
  EXPECT_FALSE(s.decode_path(again.tape).has_value());
  const auto f = s.read_max_flow();
  EXPECT_EQ(f.value, 3);
  EXPECT_EQ(f.f, (std::vector<std::int64_t>{3, 3}));
}

TEST(SpikingMaxFlow, SaturatedSingleEdgeTimesOut) {
  const auto g = chain({0});
  SpikingMaxFlow s(g, SolveMode::paper);
  s.build_capacity_neurons();
  s.build_search_network();
  auto c = s.run_search_query();
  EXPECT_TRUE(c.tape.events().empty());
  EXPECT_EQ(c.record.timesteps, 3);
  for (const auto& e : s.machine().last_trace()) {
    EXPECT_NE(e.neuron, s.layout().H(0));
    EXPECT_NE(e.neuron, s.layout().R(0));
  }
}

TEST(SpikingMaxFlow, DiamondSymmetricWaveAndTieBreak) {
  const auto g = diamond();
  SpikingMaxFlow s(g, SolveMode::paper);
  s.build_capacity_neurons();
  s.build_search_network();
  auto c = s.run_search_query();
  const auto& L = s.layout();
  EXPECT_EQ(s.machine().read_spike_time(L.H(2)), 1);
  EXPECT_EQ(s.machine().read_spike_time(L.H(3)), 1);
  EXPECT_EQ(s.machine().read_spike_time(L.H(0)), 2);
  EXPECT_EQ(s.machine().read_spike_time(L.H(1)), 2);
  ASSERT_TRUE(s.decode_path(c.tape).has_value());
  const auto& net = s.machine().network();
  ASSERT_EQ(net.size(), L.path_base + 2u);
  EXPECT_EQ(net.neuron(L.path_base).tag, 0);      // s->a, the lower id
  EXPECT_EQ(net.neuron(L.path_base + 1).tag, 2);  // a->t
}

TEST(SpikingMaxFlow, SolveExamples) {
  const auto r = solve(chain({3, 5}), SolveMode::paper);
  EXPECT_EQ(r.flow.value, 3);
  EXPECT_EQ(r.episodes.size(), 2u);
  EXPECT_EQ(r.augmentations, 1u);
  EXPECT_EQ(r.literal_voltage_sum, 3 + 3 + 2 * 3);
  EXPECT_GE(r.report.controller_time, 20);
  EXPECT_LE(r.report.controller_time, 200);

  for (auto mode : {SolveMode::paper, SolveMode::residual}) {
    const auto d = solve(diamond(), mode);
    EXPECT_EQ(d.flow.value, 2);
    EXPECT_TRUE(validate_flow(diamond(), d.flow).empty());
  }
  EXPECT_EQ(solve(chain({4}), SolveMode::paper).flow.value, 4);
  EXPECT_EQ(solve(chain({0}), SolveMode::residual).flow.value, 0);
}

TEST(SpikingMaxFlow, TrapGraphDivergesOnlyWithoutResidualEdges) {
  const auto g = trap();
  const auto paper = solve(g, SolveMode::paper);
  EXPECT_EQ(paper.flow.value, 1);
  EXPECT_TRUE(validate_flow(g, paper.flow).empty());
  const auto res = solve(g, SolveMode::residual);
  EXPECT_EQ(res.flow.value, 2);
  EXPECT_TRUE(validate_flow(g, res.flow).empty());
  ASSERT_EQ(res.augmentations, 2u);
  // the second augmentation cancels a->b
  const auto& p = res.episodes[1].path;
  ASSERT_EQ(p.size(), 5u);
  EXPECT_EQ(p[2], (ResidualArc{1, false}));
}

TEST(SpikingMaxFlow, ChainTimingLaw) {
  for (std::size_t L = 1; L <= 12; ++L) {
    const auto g = chain(std::vector<std::int64_t>(L, 2));
    const auto r = solve(g, SolveMode::paper);
    ASSERT_EQ(r.episodes.size(), 2u);
    EXPECT_EQ(r.episodes[0].sink_time, static_cast<std::int64_t>(2 * L));
    EXPECT_EQ(r.episodes[0].timesteps, static_cast<std::int64_t>(2 * L + 1));
    EXPECT_EQ(r.episodes[1].timesteps, static_cast<std::int64_t>(2 * L + 1));
    EXPECT_EQ(r.episodes[1].sink_time, -1);
  }
}

TEST(SpikingMaxFlow, WorkingMemoryIsConstant) {
  const auto g = generate_random(30, 42, 10, 5);
  const auto a = solve(g, SolveMode::residual, {.wm_capacity = 8});
  const auto b = solve(g, SolveMode::residual, {.wm_capacity = 16});
  EXPECT_EQ(a.report.controller_wm_peak, b.report.controller_wm_peak);
  EXPECT_LE(a.report.controller_wm_peak, 8);
  EXPECT_THROW(solve(g, SolveMode::residual, {.wm_capacity = 4}), WorkingMemoryError);
}

TEST(SpikingMaxFlow, MatchesEdmondsKarpOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = generate_random(12, 16, 6, seed);
    const auto ek = edmonds_karp(g);
    const auto r = solve(g, SolveMode::residual);
    EXPECT_EQ(r.flow.value, ek.value) << seed;
    EXPECT_TRUE(validate_flow(g, r.flow).empty()) << seed;
    const auto p = solve(g, SolveMode::paper);
    EXPECT_LE(p.flow.value, ek.value);
    EXPECT_TRUE(validate_flow(g, p.flow).empty()) << seed;
    for (const auto& ep : p.episodes) {
      EXPECT_LE(ep.timesteps, 2 * 16 + 1);
      EXPECT_LE(ep.spikes, 3 * 16 + 1);
      EXPECT_LE(ep.max_spikes_per_search_neuron, 1);
    }
    EXPECT_LE(p.augmentations, g.edge_count());
  }
}

TEST(SpikingMaxFlow, JsonSchema) {
  const auto j = solve(chain({3, 5}), SolveMode::paper).to_json();
  for (const char* k : {"value", "flows", "episodes", "report", "literal_voltage_sum"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["value"], 3);
  EXPECT_EQ(j["episodes"], 2);
}
