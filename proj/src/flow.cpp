#include "spikeflow/flow.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "spikeflow/error.hpp"

namespace spikeflow {

FlowNetwork::FlowNetwork(std::size_t nodes, NodeId source, NodeId sink, std::vector<Edge> edges)
    : nodes_(nodes), s_(source), t_(sink), edges_(std::move(edges)) {
  if (nodes < 2) throw InputError("a flow network needs at least two nodes");
  if (source >= nodes || sink >= nodes) throw InputError("source or sink out of range");
  if (source == sink) throw InputError("source and sink coincide");
  out_.assign(nodes, {});
  in_.assign(nodes, {});
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    const std::string tag = "edge " + std::to_string(e) + " (" + std::to_string(ed.u) + "->" +
                            std::to_string(ed.v) + ")";
    if (ed.u >= nodes || ed.v >= nodes) throw InputError(tag + " references an unknown node");
    if (ed.u == ed.v) throw InputError(tag + " is a self-loop");
    if (ed.cap < 0) throw InputError(tag + " has negative capacity");
    if (ed.v == source) throw InputError(tag + " enters the source");
    if (ed.u == sink) throw InputError(tag + " leaves the sink");
    out_[ed.u].push_back(e);
    in_[ed.v].push_back(e);
  }
}

std::int64_t FlowNetwork::max_capacity() const {
  std::int64_t m = 0;
  for (const auto& e : edges_) m = std::max(m, e.cap);
  return m;
}

std::int64_t flow_value(const FlowNetwork& g, const std::vector<std::int64_t>& f) {
  std::int64_t v = 0;
  for (EdgeId e : g.out_edges(g.source())) v += f[e];
  return v;
}

namespace {

struct ResidualSearch {
  std::vector<std::int64_t> parent_edge;  // -1 = unvisited; edge id otherwise
  std::vector<std::uint8_t> parent_forward;
  std::vector<std::uint8_t> seen;
};

// BFS over the residual graph from the source. Returns true when the sink is
// reached; the search struct then encodes a shortest path tree.
bool residual_bfs(const FlowNetwork& g, const std::vector<std::int64_t>& f, ResidualSearch& r,
                  bool stop_at_sink = true) {
  const std::size_t n = g.node_count();
  r.parent_edge.assign(n, -1);
  r.parent_forward.assign(n, 0);
  r.seen.assign(n, 0);
  std::deque<NodeId> q{g.source()};
  r.seen[g.source()] = 1;
  while (!q.empty()) {
    const NodeId x = q.front();
    q.pop_front();
    // Merge forward (out) and backward (in) arcs in ascending edge id, forward
    // first on ties (impossible, ids are unique).
    const auto& outs = g.out_edges(x);
    const auto& ins = g.in_edges(x);
    std::size_t i = 0, j = 0;
    while (i < outs.size() || j < ins.size()) {
      const bool take_out = j >= ins.size() || (i < outs.size() && outs[i] < ins[j]);
      const EdgeId e = take_out ? outs[i++] : ins[j++];
      const Edge& ed = g.edge(e);
      const NodeId y = take_out ? ed.v : ed.u;
      const bool open = take_out ? f[e] < ed.cap : f[e] > 0;
      if (!open || r.seen[y]) continue;
      r.seen[y] = 1;
      r.parent_edge[y] = e;
      r.parent_forward[y] = take_out ? 1 : 0;
      if (stop_at_sink && y == g.sink()) return true;
      q.push_back(y);
    }
  }
  return r.seen[g.sink()] != 0;
}

std::vector<ResidualArc> extract_path(const FlowNetwork& g, const ResidualSearch& r) {
  std::vector<ResidualArc> path;
  NodeId y = g.sink();
  while (y != g.source()) {
    const auto e = static_cast<EdgeId>(r.parent_edge[y]);
    const bool fwd = r.parent_forward[y] != 0;
    path.push_back({e, fwd});
    y = fwd ? g.edge(e).u : g.edge(e).v;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::optional<std::vector<ResidualArc>> bfs_shortest_augmenting_path(
    const FlowNetwork& g, const std::vector<std::int64_t>& f) {
  if (f.size() != g.edge_count()) throw InputError("flow vector size does not match edge count");
  ResidualSearch r;
  if (!residual_bfs(g, f, r)) return std::nullopt;
  return extract_path(g, r);
}

FlowAssignment edmonds_karp(const FlowNetwork& g, std::size_t* augmentations) {
  FlowAssignment out;
  out.f.assign(g.edge_count(), 0);
  std::size_t rounds = 0;
  ResidualSearch r;
  while (residual_bfs(g, out.f, r)) {
    const auto path = extract_path(g, r);
    std::int64_t delta = std::numeric_limits<std::int64_t>::max();
    for (const auto& a : path) {
      const Edge& ed = g.edge(a.edge);
      delta = std::min(delta, a.forward ? ed.cap - out.f[a.edge] : out.f[a.edge]);
    }
    for (const auto& a : path) out.f[a.edge] += a.forward ? delta : -delta;
    ++rounds;
  }
  out.value = flow_value(g, out.f);
  if (augmentations) *augmentations = rounds;
  return out;
}

std::vector<FlowViolation> validate_flow(const FlowNetwork& g, const FlowAssignment& fa) {
  std::vector<FlowViolation> v;
  if (fa.f.size() != g.edge_count()) {
    v.push_back({FlowViolation::Kind::size, -1,
                 "flow has " + std::to_string(fa.f.size()) + " entries for " +
                     std::to_string(g.edge_count()) + " edges"});
    return v;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (fa.f[e] < 0 || fa.f[e] > g.edge(e).cap)
      v.push_back({FlowViolation::Kind::capacity, e,
                   "edge " + std::to_string(e) + " carries " + std::to_string(fa.f[e]) +
                       " outside [0, " + std::to_string(g.edge(e).cap) + "]"});
  for (NodeId n = 0; n < g.node_count(); ++n) {
    if (n == g.source() || n == g.sink()) continue;
    std::int64_t in = 0, out = 0;
    for (EdgeId e : g.in_edges(n)) in += fa.f[e];
    for (EdgeId e : g.out_edges(n)) out += fa.f[e];
    if (in != out)
      v.push_back({FlowViolation::Kind::conservation, n,
                   "node " + std::to_string(n) + " has inflow " + std::to_string(in) +
                       " and outflow " + std::to_string(out)});
  }
  const std::int64_t value = flow_value(g, fa.f);
  if (value != fa.value)
    v.push_back({FlowViolation::Kind::value, -1,
                 "recorded value " + std::to_string(fa.value) + " but source outflow is " +
                     std::to_string(value)});
  return v;
}

std::int64_t residual_cut_capacity(const FlowNetwork& g, const std::vector<std::int64_t>& f) {
  ResidualSearch r;
  residual_bfs(g, f, r, false);
  std::int64_t cut = 0;
  for (const auto& e : g.edges())
    if (r.seen[e.u] && !r.seen[e.v]) cut += e.cap;
  return cut;
}

std::int64_t brute_force_max_flow(const FlowNetwork& g, std::uint64_t limit) {
  const std::size_t m = g.edge_count();
  std::uint64_t space = 1;
  for (const auto& e : g.edges()) {
    space *= static_cast<std::uint64_t>(e.cap) + 1;
    if (space > limit) throw GuardError("brute-force flow search space exceeds limit");
  }
  // A node's conservation is checked as soon as its last incident edge is set.
  std::vector<std::vector<NodeId>> closes(m);
  std::vector<std::int64_t> last(g.node_count(), -1);
  for (EdgeId e = 0; e < m; ++e) {
    last[g.edge(e).u] = e;
    last[g.edge(e).v] = e;
  }
  for (NodeId n = 0; n < g.node_count(); ++n)
    if (n != g.source() && n != g.sink() && last[n] >= 0) closes[last[n]].push_back(n);

  std::vector<std::int64_t> balance(g.node_count(), 0), f(m, 0);
  std::int64_t best = 0;
  auto rec = [&](auto&& self, EdgeId e) -> void {
    if (e == m) {
      best = std::max(best, flow_value(g, f));
      return;
    }
    const Edge& ed = g.edge(e);
    for (std::int64_t x = 0; x <= ed.cap; ++x) {
      f[e] = x;
      balance[ed.u] -= x;
      balance[ed.v] += x;
      bool ok = true;
      for (NodeId n : closes[e]) ok = ok && balance[n] == 0;
      if (ok) self(self, e + 1);
      balance[ed.u] += x;
      balance[ed.v] -= x;
    }
    f[e] = 0;
  };
  rec(rec, 0);
  return best;
}

std::int64_t brute_force_min_cut(const FlowNetwork& g) {
  const std::size_t n = g.node_count();
  if (n > 24) throw GuardError("brute-force min cut limited to 24 nodes");
  std::vector<NodeId> interior;
  for (NodeId x = 0; x < n; ++x)
    if (x != g.source() && x != g.sink()) interior.push_back(x);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<std::uint8_t> side(n, 0);
  side[g.source()] = 1;
  for (std::uint64_t mask = 0; mask < (1ull << interior.size()); ++mask) {
    for (std::size_t i = 0; i < interior.size(); ++i) side[interior[i]] = (mask >> i) & 1;
    std::int64_t cut = 0;
    for (const auto& e : g.edges())
      if (side[e.u] && !side[e.v]) cut += e.cap;
    best = std::min(best, cut);
  }
  return best;
}

std::int64_t shortest_path_length(const FlowNetwork& g) {
  std::vector<std::int64_t> dist(g.node_count(), -1);
  std::deque<NodeId> q{g.source()};
  dist[g.source()] = 0;
  while (!q.empty()) {
    const NodeId x = q.front();
    q.pop_front();
    for (EdgeId e : g.out_edges(x)) {
      const NodeId y = g.edge(e).v;
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push_back(y);
      }
    }
  }
  return dist[g.sink()];
}

std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw InputError("bounded_rand with empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

namespace {

// Weak connectivity plus directed reachability of the last node from node 0,
// over an adjacency matrix.
bool generator_ok(std::size_t n, const std::vector<std::uint8_t>& adj) {
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    for (std::size_t y = 0; y < n; ++y)
      if (!seen[y] && (adj[x * n + y] || adj[y * n + x])) {
        seen[y] = 1;
        ++count;
        stack.push_back(y);
      }
  }
  if (count != n) return false;
  std::fill(seen.begin(), seen.end(), 0);
  stack.assign(1, 0);
  seen[0] = 1;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    if (x == n - 1) return true;
    for (std::size_t y = x + 1; y < n; ++y)
      if (!seen[y] && adj[x * n + y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
  }
  return false;
}

}  // namespace

FlowNetwork generate_random(std::size_t n, std::size_t m, std::int64_t c_max, std::uint64_t seed) {
  if (n < 2) throw InputError("generator needs at least two nodes");
  if (n > 4096) throw InputError("generator limited to 4096 nodes");
  const std::size_t full = n * (n - 1) / 2;
  if (m < n - 1 || m > full)
    throw InputError("edge count " + std::to_string(m) + " outside [" + std::to_string(n - 1) +
                     ", " + std::to_string(full) + "] for " + std::to_string(n) + " nodes");
  if (c_max < 1) throw InputError("c_max must be at least 1");

  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> adj(n * n, 0);
  std::vector<std::pair<NodeId, NodeId>> live;
  live.reserve(full);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) {
      adj[i * n + j] = 1;
      live.emplace_back(i, j);
    }

  std::size_t misses = 0;
  while (live.size() > m) {
    const std::size_t k = bounded_rand(rng, live.size());
    const auto [u, v] = live[k];
    adj[u * n + v] = 0;
    if (generator_ok(n, adj)) {
      live[k] = live.back();
      live.pop_back();
      misses = 0;
    } else {
      adj[u * n + v] = 1;
      if (++misses > 64 * full) throw InvariantError("generator made no progress");
    }
  }

  std::sort(live.begin(), live.end());
  std::vector<Edge> edges;
  edges.reserve(live.size());
  for (const auto& [u, v] : live)
    edges.push_back({u, v, 1 + static_cast<std::int64_t>(bounded_rand(rng, c_max))});
  return FlowNetwork(n, 0, static_cast<NodeId>(n - 1), std::move(edges));
}

FlowNetwork read_dimacs(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  long long n = -1, m = -1;
  long long s = -1, t = -1;
  std::size_t problem_line = 0;
  std::vector<Edge> edges;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ss(raw);
    std::string kind;
    if (!(ss >> kind) || kind == "c") continue;
    if (kind == "p") {
      std::string type;
      if (problem_line) throw ParseError("second problem line", line);
      if (!(ss >> type >> n >> m) || type != "max")
        throw ParseError("expected: p max <nodes> <arcs>", line);
      if (n < 2 || m < 0) throw ParseError("bad problem size", line);
      problem_line = line;
    } else if (kind == "n") {
      long long id;
      std::string which;
      if (!problem_line) throw ParseError("node line before problem line", line);
      if (!(ss >> id >> which)) throw ParseError("expected: n <id> s|t", line);
      if (id < 1 || id > n) throw ParseError("node id out of range", line);
      if (which == "s") {
        if (s >= 0) throw ParseError("more than one source", line);
        s = id - 1;
      } else if (which == "t") {
        if (t >= 0) throw ParseError("more than one sink", line);
        t = id - 1;
      } else {
        throw ParseError("node designator must be s or t", line);
      }
    } else if (kind == "a") {
      long long u, v, cap;
      if (!problem_line) throw ParseError("arc line before problem line", line);
      if (!(ss >> u >> v >> cap)) throw ParseError("expected: a <u> <v> <cap>", line);
      if (u < 1 || u > n || v < 1 || v > n) throw ParseError("arc endpoint out of range", line);
      if (cap < 0) throw ParseError("negative capacity", line);
      if (u == v) throw ParseError("self-loop", line);
      edges.push_back({static_cast<NodeId>(u - 1), static_cast<NodeId>(v - 1), cap});
    } else {
      throw ParseError("unknown line type '" + kind + "'", line);
    }
    std::string extra;
    if (ss >> extra) throw ParseError("trailing field '" + extra + "'", line);
  }
  if (!problem_line) throw ParseError("missing problem line", line);
  if (s < 0 || t < 0) throw ParseError("missing source or sink designator", line);
  if (static_cast<long long>(edges.size()) != m)
    throw ParseError("problem line declares " + std::to_string(m) + " arcs, found " +
                         std::to_string(edges.size()),
                     problem_line);
  try {
    return FlowNetwork(static_cast<std::size_t>(n), static_cast<NodeId>(s),
                       static_cast<NodeId>(t), std::move(edges));
  } catch (const InputError& e) {
    throw ParseError(e.what(), 0);
  }
}

void write_dimacs(std::ostream& out, const FlowNetwork& g, const std::string& comment) {
  if (!comment.empty()) {
    std::istringstream lines(comment);
    std::string l;
    while (std::getline(lines, l)) out << "c " << l << '\n';
  }
  out << "p max " << g.node_count() << ' ' << g.edge_count() << '\n';
  out << "n " << g.source() + 1 << " s\n";
  out << "n " << g.sink() + 1 << " t\n";
  for (const auto& e : g.edges()) out << "a " << e.u + 1 << ' ' << e.v + 1 << ' ' << e.cap << '\n';
}

}  // namespace spikeflow
