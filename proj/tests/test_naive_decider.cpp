#include <gtest/gtest.h>

#include "spikeflow/error.hpp"
#include "spikeflow/naive_decider.hpp"
#include "spikeflow/spiking_maxflow.hpp"

using namespace spikeflow;

namespace {

std::int64_t fire_time(const SimulationState& s, NeuronId id) {
  for (const auto& e : s.trace)
    if (e.neuron == id) return e.time;
  return -1;
}

std::int64_t subnet_e_time(std::int64_t in, std::int64_t out) {
  SpikingNetwork net;
  const auto clock = add_clock(net);
  const auto sub = add_conservation_subnet(net, clock, in, out, 20);
  const auto s = run(net, 15, StopCondition::exact_step_count(15));
  // every neuron of the circuit spikes at most once
  for (NeuronId id : {sub.timer_in, sub.timer_out, sub.detect_in, sub.detect_out, sub.E}) {
    int count = 0;
    for (const auto& e : s.trace) count += e.neuron == id;
    EXPECT_LE(count, 1);
  }
  return fire_time(s, sub.E);
}

}  // namespace

TEST(NaiveDecider, ConservationSubnet) {
  EXPECT_EQ(subnet_e_time(2, 2), -1);
  EXPECT_EQ(subnet_e_time(1, 3), 3);
  EXPECT_EQ(subnet_e_time(0, 1), 2);
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b) EXPECT_EQ(subnet_e_time(a, b), a == b ? -1 : std::min(a, b) + 2);
}

TEST(NaiveDecider, SingleEdgeExamples) {
  const FlowNetwork one(2, 0, 1, {{0, 1, 1}});
  const auto yes = decide_naive(one, 0);
  EXPECT_TRUE(yes.accept);
  EXPECT_EQ(yes.accept_time, yes.f_max + 5);
  const auto no = decide_naive(one, 1);
  EXPECT_FALSE(no.accept);
  EXPECT_EQ(no.candidates, 0);
  EXPECT_EQ(no.accept_time, -1);
}

TEST(NaiveDecider, PathNeedsConservation) {
  const FlowNetwork path(3, 0, 2, {{0, 1, 1}, {1, 2, 1}});
  const auto r = decide_naive(path, 0);
  EXPECT_TRUE(r.accept);
  EXPECT_EQ(r.candidates, 2);  // (1,0) fails at the middle node, (1,1) passes
  EXPECT_EQ(r.accept_time, r.f_max + 5);
  const FlowNetwork blocked(3, 0, 2, {{0, 1, 2}, {1, 2, 0}});
  const auto b = decide_naive(blocked, 0);
  EXPECT_FALSE(b.accept);
  EXPECT_GE(b.reject_time, 0);
}

TEST(NaiveDecider, FmaxCoversNodeSums) {
  // two unit edges into a, one edge of capacity 2 out of a
  const FlowNetwork g(4, 0, 3, {{0, 1, 1}, {0, 2, 1}, {2, 1, 1}, {1, 3, 2}});
  EXPECT_EQ(naive_f_max(g), 2);
  const FlowNetwork h(4, 0, 3, {{0, 1, 1}, {0, 1, 1}, {0, 1, 1}, {1, 3, 1}, {1, 3, 1}, {1, 3, 1}});
  EXPECT_EQ(naive_f_max(h), 3);
  const auto r = decide_naive(h, 2);
  EXPECT_TRUE(r.accept);
  EXPECT_EQ(r.accept_time, 3 + 5);
}

TEST(NaiveDecider, AgreesWithEdmondsKarpOnRandomTinyGraphs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + bounded_rand(rng, 3);
    std::vector<Edge> edges;
    const std::size_t m = 1 + bounded_rand(rng, 4);
    for (std::size_t k = 0; k < m; ++k) {
      const auto u = static_cast<NodeId>(bounded_rand(rng, n - 1));
      const auto v = static_cast<NodeId>(1 + bounded_rand(rng, n - 1));
      if (u != v) edges.push_back({u, v, static_cast<std::int64_t>(bounded_rand(rng, 3))});
    }
    const FlowNetwork g(n, 0, static_cast<NodeId>(n - 1), edges);
    const auto best = edmonds_karp(g).value;
    for (std::int64_t d = 0; d <= 3; ++d) {
      const auto r = decide_naive(g, d);
      ASSERT_EQ(r.accept, best > d) << trial << " d=" << d;
      if (r.accept) ASSERT_EQ(r.accept_time, r.f_max + 5);
    }
  }
}

TEST(NaiveDecider, NeuronCountGrowsWithCandidates) {
  const FlowNetwork g(4, 0, 3, {{0, 1, 2}, {0, 2, 2}, {1, 3, 2}, {2, 3, 2}});
  const auto r = decide_naive(g, 0);
  EXPECT_GE(static_cast<std::int64_t>(r.neurons), r.candidates * 2);
  const auto spiking = solve(g, SolveMode::paper);
  EXPECT_GT(r.neurons, spiking.peak_neurons);
  const FlowNetwork one(2, 0, 1, {{0, 1, 2}});
  const auto two = decide_naive(one, 0);
  ASSERT_EQ(two.candidates, 2);
  EXPECT_GT(two.neurons, solve(one, SolveMode::paper).peak_neurons);
}

TEST(NaiveDecider, GuardAndBadThreshold) {
  std::vector<Edge> edges;
  for (int i = 0; i < 7; ++i) edges.push_back({0, 1, 3});
  EXPECT_THROW(build_decider(FlowNetwork(2, 0, 1, edges), 0), GuardError);
  EXPECT_THROW(build_decider(FlowNetwork(2, 0, 1, {{0, 1, 1}}), -1), InputError);
}
