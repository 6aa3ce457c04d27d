#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace spikeflow {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  std::int64_t cap = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed capacitated graph with a source (no incoming edges) and a sink (no
// outgoing edges). Edge ids are positions in edges(). Antiparallel edges and
// cycles among interior nodes are allowed.
class FlowNetwork {
 public:
  FlowNetwork() = default;
  // throws InputError when the invariants do not hold
  FlowNetwork(std::size_t nodes, NodeId source, NodeId sink, std::vector<Edge> edges);

  std::size_t node_count() const { return nodes_; }
  std::size_t edge_count() const { return edges_.size(); }
  NodeId source() const { return s_; }
  NodeId sink() const { return t_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<EdgeId>& out_edges(NodeId n) const { return out_[n]; }
  const std::vector<EdgeId>& in_edges(NodeId n) const { return in_[n]; }
  std::int64_t max_capacity() const;

  friend bool operator==(const FlowNetwork& a, const FlowNetwork& b) {
    return a.nodes_ == b.nodes_ && a.s_ == b.s_ && a.t_ == b.t_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t nodes_ = 0;
  NodeId s_ = 0;
  NodeId t_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_, in_;
};

struct FlowAssignment {
  std::vector<std::int64_t> f;  // per edge id
  std::int64_t value = 0;       // net flow out of the source
};

// Net flow leaving the source under f.
std::int64_t flow_value(const FlowNetwork& g, const std::vector<std::int64_t>& f);

// Residual arc: forward arcs push along the edge, backward arcs cancel flow.
struct ResidualArc {
  EdgeId edge = 0;
  bool forward = true;
  friend bool operator==(const ResidualArc&, const ResidualArc&) = default;
};

// Fewest-arc augmenting path in the residual graph of f, or nullopt. Arcs are
// explored in ascending edge id, forward arcs before backward arcs.
std::optional<std::vector<ResidualArc>> bfs_shortest_augmenting_path(
    const FlowNetwork& g, const std::vector<std::int64_t>& f);

// Classical Edmonds-Karp. The optional counter receives the number of
// augmentations.
FlowAssignment edmonds_karp(const FlowNetwork& g, std::size_t* augmentations = nullptr);

struct FlowViolation {
  enum class Kind { size, capacity, conservation, value };
  Kind kind;
  std::int64_t where;  // edge id for capacity, node id for conservation, -1 otherwise
  std::string message;
};

// Empty when f is a feasible flow whose recorded value matches.
std::vector<FlowViolation> validate_flow(const FlowNetwork& g, const FlowAssignment& f);

// Capacity of the cut between the residual-reachable set of f and the rest.
std::int64_t residual_cut_capacity(const FlowNetwork& g, const std::vector<std::int64_t>& f);

// Optimum by exhaustive search over integer flows. throws GuardError when the
// search space exceeds `limit` candidate assignments.
std::int64_t brute_force_max_flow(const FlowNetwork& g, std::uint64_t limit = 1u << 20);

// Minimum s-t cut capacity over all 2^(n-2) node partitions. n <= 24.
std::int64_t brute_force_min_cut(const FlowNetwork& g);

// Length of the fewest-edge s-t path ignoring capacities, -1 if none.
std::int64_t shortest_path_length(const FlowNetwork& g);

// Random connected DAG: the complete DAG i->j (j>i) thinned by random edge
// deletions. A deletion is undone when the graph stops being weakly
// connected or node n-1 stops being reachable from node 0. Capacities are
// uniform in [1, c_max]. Edges come out sorted by (u, v).
FlowNetwork generate_random(std::size_t n_nodes, std::size_t n_edges, std::int64_t c_max,
                            std::uint64_t seed);

// Uniform integer in [0, bound) from a 64-bit stream, identical on every
// platform (unlike std::uniform_int_distribution).
std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t bound);

// splitmix64 step, used to derive independent per-instance seeds.
std::uint64_t splitmix64(std::uint64_t x);

// DIMACS max-flow format with 1-based node ids. throws ParseError.
FlowNetwork read_dimacs(std::istream& in);
void write_dimacs(std::ostream& out, const FlowNetwork& g, const std::string& comment = {});

}  // namespace spikeflow
