#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spikeflow/snn.hpp"

namespace spikeflow {

// ---------------------------------------------------------------------------
// Threshold network flow with reservoirs.

enum class TnfrNodeKind : std::uint8_t { normal, source, sink, reservoir_sink, reservoir_source };

struct TnfrArc {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::int64_t cmin = 0;
  std::int64_t cmax = 0;
};

// Arc flow is 0 or in [cmin, cmax]. Flow is conserved everywhere except at
// the master source/sink and the reservoirs. The question is whether the
// flow out of the master source can exceed d.
struct TnfrInstance {
  std::vector<TnfrNodeKind> kinds;
  std::vector<std::string> node_labels;
  std::vector<TnfrArc> arcs;
  std::vector<std::string> arc_labels;
  std::uint32_t s = 0;
  std::uint32_t t = 0;
  std::int64_t d = 0;

  std::uint32_t add_node(TnfrNodeKind kind, std::string label = {});
  std::uint32_t add_arc(std::uint32_t u, std::uint32_t v, std::int64_t cmin, std::int64_t cmax,
                        std::string label = {});
  std::size_t node_count() const { return kinds.size(); }
  std::size_t arc_count() const { return arcs.size(); }
  bool conserves(std::uint32_t node) const { return kinds[node] == TnfrNodeKind::normal; }

  // throws InputError unless there is exactly one source and one sink and
  // every arc is well formed.
  void validate() const;
};

std::int64_t tnfr_value(const TnfrInstance& inst, const std::vector<std::int64_t>& flow);

// Empty when flow satisfies every arc domain and conservation constraint.
// Does not look at d.
std::vector<std::string> tnfr_violations(const TnfrInstance& inst,
                                         const std::vector<std::int64_t>& flow);

struct FeasibleOptions {
  std::size_t max_arcs = 64;
  std::int64_t max_capacity = 63;
  std::uint64_t node_budget = 100'000'000;
};

struct FeasibleResult {
  bool feasible = false;
  std::vector<std::int64_t> flow;  // witness when feasible
  std::uint64_t nodes = 0;         // search nodes expanded
};

// Exact search for a flow with value > inst.d. Domains are bitsets over
// {0} u [cmin, cmax]; conservation and the value bound are propagated to a
// fixpoint before branching on the smallest domain. throws GuardError when
// the instance exceeds the guards or the node budget runs out.
FeasibleResult check_feasible(const TnfrInstance& inst, FeasibleOptions opts = {});

// Plain enumeration of every assignment; oracle for check_feasible.
FeasibleResult enumerate_feasible(const TnfrInstance& inst, std::uint64_t limit = 1u << 22);

// Text format: "p tnfr <nodes> <arcs> <d>", "n <id> s|t|r|p", "a <u> <v> <cmin> <cmax>",
// ids 1-based, "c" comments. throws ParseError.
TnfrInstance read_tnfr(std::istream& in);
void write_tnfr(std::ostream& out, const TnfrInstance& inst);
void write_witness_csv(std::ostream& out, const std::vector<std::int64_t>& flow);

// ---------------------------------------------------------------------------
// Reduction from time- and energy-bounded spiking networks.

// The network uses overflow reset. Exactly one neuron has role input (the
// constant neuron, firing every step), one has role accept, one role reject.
// Steps are numbered 1..t; step k is simulator time k-1.
struct ReductionConfig {
  SpikingNetwork snn;
  std::int64_t t = 1;
  std::int64_t e = 1;
};

struct AssumptionViolation {
  int index;  // 2..6, see check_assumptions
  std::string message;
};

// 2: one constant neuron (threshold 1, no inputs), no other bias (v0 = 0)
// 3: non-negative integer weights and delays, thresholds >= 1, acyclic
//    delay-0 wiring
// 4: every leak is 1
// 5: overflow reset, and no carried potential ever reaches threshold
// 6: the reject neuron fires at step k iff k is before the first accept spike
// Also checked: t >= 1 and 1 <= e <= n*t, n counting the neurons other than
// the constant one.
std::vector<AssumptionViolation> check_assumptions(const ReductionConfig& cfg);

// Run of the network under the reduction's semantics.
struct ReductionRun {
  std::vector<std::vector<std::uint8_t>> fired;    // [neuron][k], k = 1..t (index 0 unused)
  std::vector<std::vector<std::int64_t>> carry;    // potential after step k
  std::int64_t accept_step = -1;                   // first accept spike, -1 if none
  std::int64_t spikes = 0;                         // non-constant spikes in 1..t
  std::int64_t reject_spikes = 0;
  bool accepts = false;                            // accept_step <= t and spikes <= e-1
};
ReductionRun simulate_reduction(const ReductionConfig& cfg);

enum class Mutation : std::uint8_t { none, drop_failure_gadget, bypass_failure_gadget };

// How each emitted arc's flow follows from a run; used to build witnesses.
struct ArcRule {
  enum class Kind : std::uint8_t {
    fixed,       // always `amount`
    on_fire,     // `amount` if neuron fires at step k
    carry,       // potential carried out of step k
    energy_chain,  // 1 + non-constant spikes up to step k
    energy_excess, // total non-constant spikes
    time_chain,    // 1 + reject spikes up to step k
    time_excess,   // total reject spikes
    zero,
  };
  Kind kind = Kind::zero;
  std::int64_t amount = 0;
  std::uint32_t neuron = 0;
  std::int64_t k = 0;
};

struct Reduction {
  TnfrInstance instance;
  std::vector<ArcRule> rules;  // per arc
  NeuronId constant = 0, accept = 0, reject = 0;
};

// throws InputError naming the violated assumption.
Reduction reduce(const ReductionConfig& cfg, Mutation mutation = Mutation::none);

// Flow dictated by the run on every arc, whether or not the run accepts. On a
// rejecting run it breaks exactly the gadget whose bound was exceeded.
std::vector<std::int64_t> dictated_flow(const ReductionConfig& cfg, const Reduction& red);

// Flow of value 3 read off an accepting run; nullopt when the run rejects.
std::optional<std::vector<std::int64_t>> simulate_to_witness(const ReductionConfig& cfg,
                                                             const Reduction& red);

struct VerifyReport {
  bool snn_accepts = false;
  bool witness_valid = false;   // accept direction: witness checked against the instance
  bool checker_feasible = false;
  bool passed = false;
  std::size_t nodes = 0;
  std::size_t arcs = 0;
  std::uint64_t search_nodes = 0;
  std::string detail;
};

VerifyReport verify_reduction(const ReductionConfig& cfg, Mutation mutation = Mutation::none,
                              FeasibleOptions opts = {.max_arcs = 4096});

}  // namespace spikeflow
