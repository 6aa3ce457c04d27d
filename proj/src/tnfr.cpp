#include "spikeflow/tnfr.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

#include "spikeflow/error.hpp"

namespace spikeflow {

std::uint32_t TnfrInstance::add_node(TnfrNodeKind kind, std::string label) {
  const auto id = static_cast<std::uint32_t>(kinds.size());
  kinds.push_back(kind);
  node_labels.push_back(std::move(label));
  if (kind == TnfrNodeKind::source) s = id;
  if (kind == TnfrNodeKind::sink) t = id;
  return id;
}

std::uint32_t TnfrInstance::add_arc(std::uint32_t u, std::uint32_t v, std::int64_t cmin,
                                    std::int64_t cmax, std::string label) {
  const auto id = static_cast<std::uint32_t>(arcs.size());
  arcs.push_back({u, v, cmin, cmax});
  arc_labels.push_back(std::move(label));
  return id;
}

void TnfrInstance::validate() const {
  std::size_t sources = 0, sinks = 0;
  for (auto k : kinds) {
    sources += k == TnfrNodeKind::source;
    sinks += k == TnfrNodeKind::sink;
  }
  if (sources != 1 || sinks != 1) throw InputError("need exactly one source and one sink");
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto& a = arcs[i];
    const std::string where = "arc " + std::to_string(i + 1);
    if (a.u >= kinds.size() || a.v >= kinds.size()) throw InputError(where + ": unknown node");
    if (a.cmin < 0 || a.cmin > a.cmax) throw InputError(where + ": need 0 <= cmin <= cmax");
    if (a.v == s) throw InputError(where + ": enters the source");
    if (a.u == t) throw InputError(where + ": leaves the sink");
  }
  if (d < 0) throw InputError("decision threshold must be non-negative");
}

std::int64_t tnfr_value(const TnfrInstance& inst, const std::vector<std::int64_t>& flow) {
  std::int64_t v = 0;
  for (std::size_t i = 0; i < inst.arcs.size(); ++i)
    if (inst.arcs[i].u == inst.s) v += flow.at(i);
  return v;
}

std::vector<std::string> tnfr_violations(const TnfrInstance& inst,
                                         const std::vector<std::int64_t>& flow) {
  std::vector<std::string> out;
  if (flow.size() != inst.arcs.size()) {
    out.push_back("flow has " + std::to_string(flow.size()) + " entries, instance has " +
                  std::to_string(inst.arcs.size()) + " arcs");
    return out;
  }
  std::vector<std::int64_t> balance(inst.node_count(), 0);
  for (std::size_t i = 0; i < flow.size(); ++i) {
    const auto& a = inst.arcs[i];
    const auto f = flow[i];
    if (f != 0 && (f < a.cmin || f > a.cmax))
      out.push_back("arc " + std::to_string(i + 1) + " (" + inst.arc_labels[i] + "): flow " +
                    std::to_string(f) + " outside {0} u [" + std::to_string(a.cmin) + ", " +
                    std::to_string(a.cmax) + "]");
    balance[a.u] -= f;
    balance[a.v] += f;
  }
  for (std::uint32_t n = 0; n < inst.node_count(); ++n)
    if (inst.conserves(n) && balance[n] != 0)
      out.push_back("node " + std::to_string(n + 1) + " (" + inst.node_labels[n] +
                    "): imbalance " + std::to_string(balance[n]));
  return out;
}

// ---------------------------------------------------------------------------
// Exact search

namespace {

using Mask = std::uint64_t;

Mask range_mask(std::int64_t lo, std::int64_t hi) {
  if (lo > hi || hi < 0 || lo > 63) return 0;
  lo = std::max<std::int64_t>(lo, 0);
  hi = std::min<std::int64_t>(hi, 63);
  const Mask upto = hi == 63 ? ~Mask{0} : (Mask{1} << (hi + 1)) - 1;
  return upto & ~((Mask{1} << lo) - 1);
}

std::int64_t lo_of(Mask m) { return std::countr_zero(m); }
std::int64_t hi_of(Mask m) { return 63 - std::countl_zero(m); }

struct Term {
  std::uint32_t arc;
  int coef;
};

// Linear constraint sum(coef * x) == 0, or >= rhs when `at_least`.
struct Constraint {
  std::vector<Term> terms;
  bool at_least = false;
  std::int64_t rhs = 0;
};

class Search {
 public:
  Search(const TnfrInstance& inst, std::uint64_t budget) : budget_(budget) {
    const auto m = inst.arc_count();
    dom_.resize(m);
    for (std::size_t i = 0; i < m; ++i)
      dom_[i] = Mask{1} | range_mask(std::max<std::int64_t>(inst.arcs[i].cmin, 1), inst.arcs[i].cmax);
    std::vector<Constraint> by_node(inst.node_count());
    for (std::uint32_t i = 0; i < m; ++i) {
      by_node[inst.arcs[i].u].terms.push_back({i, -1});
      by_node[inst.arcs[i].v].terms.push_back({i, +1});
    }
    for (std::uint32_t n = 0; n < inst.node_count(); ++n)
      if (inst.conserves(n) && !by_node[n].terms.empty()) cons_.push_back(std::move(by_node[n]));
    Constraint value{.terms = {}, .at_least = true, .rhs = inst.d + 1};
    for (std::uint32_t i = 0; i < m; ++i)
      if (inst.arcs[i].u == inst.s) value.terms.push_back({i, +1});
    cons_.push_back(std::move(value));
    watch_.resize(m);
    for (std::size_t c = 0; c < cons_.size(); ++c)
      for (const auto& t : cons_[c].terms) watch_[t.arc].push_back(c);
  }

  bool run() { return dfs(dom_); }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<std::int64_t>& solution() const { return solution_; }

 private:
  bool restrict(std::vector<Mask>& dom, std::uint32_t arc, std::int64_t lo, std::int64_t hi,
                std::vector<std::size_t>& queue, std::vector<std::uint8_t>& queued) const {
    const Mask next = dom[arc] & range_mask(lo, hi);
    if (next == dom[arc]) return true;
    dom[arc] = next;
    if (!next) return false;
    for (auto c : watch_[arc])
      if (!queued[c]) {
        queued[c] = 1;
        queue.push_back(c);
      }
    return true;
  }

  bool propagate(std::vector<Mask>& dom) const {
    std::vector<std::size_t> queue(cons_.size());
    std::vector<std::uint8_t> queued(cons_.size(), 1);
    for (std::size_t c = 0; c < cons_.size(); ++c) queue[c] = c;
    while (!queue.empty()) {
      const auto ci = queue.back();
      queue.pop_back();
      queued[ci] = 0;
      const auto& c = cons_[ci];
      std::int64_t smin = 0, smax = 0;
      for (const auto& t : c.terms) {
        const auto lo = lo_of(dom[t.arc]), hi = hi_of(dom[t.arc]);
        smin += t.coef > 0 ? lo : -hi;
        smax += t.coef > 0 ? hi : -lo;
      }
      if (c.at_least) {
        if (smax < c.rhs) return false;
        for (const auto& t : c.terms) {
          const auto hi = hi_of(dom[t.arc]);
          if (!restrict(dom, t.arc, c.rhs - (smax - hi), 63, queue, queued)) return false;
        }
        continue;
      }
      if (smin > 0 || smax < 0) return false;
      for (const auto& t : c.terms) {
        const auto lo = lo_of(dom[t.arc]), hi = hi_of(dom[t.arc]);
        const std::int64_t omin = smin - (t.coef > 0 ? lo : -hi);
        const std::int64_t omax = smax - (t.coef > 0 ? hi : -lo);
        const bool ok = t.coef > 0 ? restrict(dom, t.arc, -omax, -omin, queue, queued)
                                   : restrict(dom, t.arc, omin, omax, queue, queued);
        // Stale sums only loosen the derived bounds; restrict() re-queues ci.
        if (!ok) return false;
      }
    }
    return true;
  }

  bool dfs(std::vector<Mask> dom) {
    if (++nodes_ > budget_)
      throw GuardError("feasibility search exceeded " + std::to_string(budget_) + " nodes");
    if (!propagate(dom)) return false;
    std::size_t best = dom.size();
    int best_size = 65;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      const int sz = std::popcount(dom[i]);
      if (sz > 1 && sz < best_size) {
        best = i;
        best_size = sz;
      }
    }
    if (best == dom.size()) {
      solution_.resize(dom.size());
      for (std::size_t i = 0; i < dom.size(); ++i) solution_[i] = lo_of(dom[i]);
      return true;
    }
    for (Mask rest = dom[best]; rest; rest &= rest - 1) {
      auto child = dom;
      child[best] = rest & -rest;
      if (dfs(std::move(child))) return true;
    }
    return false;
  }

  std::vector<Mask> dom_;
  std::vector<Constraint> cons_;
  std::vector<std::vector<std::size_t>> watch_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::int64_t> solution_;
};

}  // namespace

FeasibleResult check_feasible(const TnfrInstance& inst, FeasibleOptions opts) {
  inst.validate();
  if (inst.arc_count() > opts.max_arcs)
    throw GuardError("instance has " + std::to_string(inst.arc_count()) + " arcs, guard is " +
                     std::to_string(opts.max_arcs));
  const auto cap_guard = std::min<std::int64_t>(opts.max_capacity, 63);
  for (const auto& a : inst.arcs)
    if (a.cmax > cap_guard)
      throw GuardError("arc capacity " + std::to_string(a.cmax) + " exceeds guard " +
                       std::to_string(cap_guard));
  Search search(inst, opts.node_budget);
  FeasibleResult r;
  r.feasible = search.run();
  r.nodes = search.nodes();
  if (r.feasible) r.flow = search.solution();
  return r;
}

FeasibleResult enumerate_feasible(const TnfrInstance& inst, std::uint64_t limit) {
  inst.validate();
  const auto m = inst.arc_count();
  std::vector<std::vector<std::int64_t>> values(m);
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < m; ++i) {
    values[i].push_back(0);
    for (auto c = std::max<std::int64_t>(inst.arcs[i].cmin, 1); c <= inst.arcs[i].cmax; ++c)
      values[i].push_back(c);
    space *= values[i].size();
    if (space > limit) throw GuardError("enumeration space exceeds " + std::to_string(limit));
  }
  FeasibleResult r;
  std::vector<std::size_t> idx(m, 0);
  std::vector<std::int64_t> flow(m, 0);
  for (bool more = true; more;) {
    ++r.nodes;
    for (std::size_t i = 0; i < m; ++i) flow[i] = values[i][idx[i]];
    if (tnfr_value(inst, flow) > inst.d && tnfr_violations(inst, flow).empty()) {
      r.feasible = true;
      r.flow = flow;
      return r;
    }
    more = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (++idx[i] < values[i].size()) {
        more = true;
        break;
      }
      idx[i] = 0;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// IO

TnfrInstance read_tnfr(std::istream& in) {
  TnfrInstance inst;
  bool have_header = false;
  std::size_t declared_arcs = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      if (have_header) throw ParseError("duplicate problem line", lineno);
      std::string kind;
      long long nodes = 0, arcs = 0, d = 0;
      if (!(ls >> kind >> nodes >> arcs >> d) || kind != "tnfr" || nodes < 2 || arcs < 0 || d < 0)
        throw ParseError("expected 'p tnfr <nodes> <arcs> <d>'", lineno);
      for (long long i = 0; i < nodes; ++i) inst.add_node(TnfrNodeKind::normal);
      inst.d = d;
      declared_arcs = static_cast<std::size_t>(arcs);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("record before problem line", lineno);
    if (tag == "n") {
      long long id = 0;
      std::string kind;
      if (!(ls >> id >> kind)) throw ParseError("expected 'n <id> s|t|r|p'", lineno);
      if (id < 1 || static_cast<std::size_t>(id) > inst.node_count())
        throw ParseError("node id " + std::to_string(id) + " out of range", lineno);
      const auto n = static_cast<std::uint32_t>(id - 1);
      if (inst.kinds[n] != TnfrNodeKind::normal)
        throw ParseError("node " + std::to_string(id) + " designated twice", lineno);
      if (kind == "s") {
        if (std::count(inst.kinds.begin(), inst.kinds.end(), TnfrNodeKind::source))
          throw ParseError("multiple sources", lineno);
        inst.kinds[n] = TnfrNodeKind::source;
        inst.s = n;
      } else if (kind == "t") {
        if (std::count(inst.kinds.begin(), inst.kinds.end(), TnfrNodeKind::sink))
          throw ParseError("multiple sinks", lineno);
        inst.kinds[n] = TnfrNodeKind::sink;
        inst.t = n;
      } else if (kind == "r") {
        inst.kinds[n] = TnfrNodeKind::reservoir_sink;
      } else if (kind == "p") {
        inst.kinds[n] = TnfrNodeKind::reservoir_source;
      } else {
        throw ParseError("unknown node kind '" + kind + "'", lineno);
      }
    } else if (tag == "a") {
      long long u = 0, v = 0, lo = 0, hi = 0;
      if (!(ls >> u >> v >> lo >> hi)) throw ParseError("expected 'a <u> <v> <cmin> <cmax>'", lineno);
      const auto n = static_cast<long long>(inst.node_count());
      if (u < 1 || u > n || v < 1 || v > n) throw ParseError("arc endpoint out of range", lineno);
      if (lo < 0 || lo > hi) throw ParseError("need 0 <= cmin <= cmax", lineno);
      inst.add_arc(static_cast<std::uint32_t>(u - 1), static_cast<std::uint32_t>(v - 1), lo, hi);
    } else {
      throw ParseError("unknown record '" + tag + "'", lineno);
    }
  }
  if (!have_header) throw ParseError("missing problem line", 0);
  if (inst.arc_count() != declared_arcs)
    throw ParseError("declared " + std::to_string(declared_arcs) + " arcs, found " +
                         std::to_string(inst.arc_count()),
                     lineno);
  if (!std::count(inst.kinds.begin(), inst.kinds.end(), TnfrNodeKind::source) ||
      !std::count(inst.kinds.begin(), inst.kinds.end(), TnfrNodeKind::sink))
    throw ParseError("missing source or sink designation", lineno);
  return inst;
}

void write_tnfr(std::ostream& out, const TnfrInstance& inst) {
  out << "p tnfr " << inst.node_count() << ' ' << inst.arc_count() << ' ' << inst.d << '\n';
  for (std::uint32_t n = 0; n < inst.node_count(); ++n) {
    const char* k = nullptr;
    switch (inst.kinds[n]) {
      case TnfrNodeKind::source: k = "s"; break;
      case TnfrNodeKind::sink: k = "t"; break;
      case TnfrNodeKind::reservoir_sink: k = "r"; break;
      case TnfrNodeKind::reservoir_source: k = "p"; break;
      case TnfrNodeKind::normal: break;
    }
    if (k) out << "n " << n + 1 << ' ' << k << '\n';
    if (!inst.node_labels[n].empty()) out << "c node " << n + 1 << ' ' << inst.node_labels[n] << '\n';
  }
  for (std::size_t i = 0; i < inst.arc_count(); ++i) {
    const auto& a = inst.arcs[i];
    out << "a " << a.u + 1 << ' ' << a.v + 1 << ' ' << a.cmin << ' ' << a.cmax << '\n';
    if (!inst.arc_labels[i].empty()) out << "c arc " << i + 1 << ' ' << inst.arc_labels[i] << '\n';
  }
}

void write_witness_csv(std::ostream& out, const std::vector<std::int64_t>& flow) {
  out << "arc,flow\n";
  for (std::size_t i = 0; i < flow.size(); ++i) out << i + 1 << ',' << flow[i] << '\n';
}

}  // namespace spikeflow
