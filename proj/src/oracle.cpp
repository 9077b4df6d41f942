#include "confluent/oracle.hpp"

#include "confluent/dynamic.hpp"
#include "confluent/staticflow.hpp"
#include "internal.hpp"

#include <algorithm>
#include <map>

namespace confluent {

namespace {

struct TreeSearch {
  const Network& net;
  const std::vector<NodeId>& cover;
  const std::function<void(const ConfluentRouting&)>& visit;
  std::vector<bool> useful;  // can reach a sink without leaving through one
  ConfluentRouting r;
  std::vector<int> walk_of;  // cover index of the walk currently holding a node, or -1

  void next_source(std::size_t i) {
    while (i < cover.size() && (net.is_sink(cover[i]) || r.out_arc[cover[i]] != kNone)) ++i;
    if (i == cover.size()) {
      visit(r);
      return;
    }
    walk(i, cover[i]);
  }

  // u is unassigned and not a sink.
  void walk(std::size_t i, NodeId u) {
    walk_of[u] = static_cast<int>(i);
    for (ArcId a : net.out_arcs(u)) {
      const NodeId w = net.head(a);
      if (walk_of[w] == static_cast<int>(i) || !useful[w]) continue;
      r.out_arc[u] = a;
      if (net.is_sink(w) || r.out_arc[w] != kNone) {
        next_source(i + 1);
      } else {
        walk(i, w);
      }
      r.out_arc[u] = kNone;
    }
    walk_of[u] = -1;
  }
};

std::vector<bool> useful_nodes(const Network& net) {
  std::vector<bool> ok(net.n(), false);
  std::vector<NodeId> stack;
  for (NodeId t : net.sinks()) {
    ok[t] = true;
    stack.push_back(t);
  }
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (ArcId a : net.in_arcs(v)) {
      const NodeId u = net.tail(a);
      if (ok[u] || net.is_sink(u)) continue;
      ok[u] = true;
      stack.push_back(u);
    }
  }
  return ok;
}

}  // namespace

void enumerate_confluent_trees(const Network& net, const std::vector<NodeId>& cover,
                               const std::function<void(const ConfluentRouting&)>& visit,
                               std::int64_t guard) {
  TreeSearch ts{net, cover, visit, useful_nodes(net), empty_routing(net),
                std::vector<int>(net.n(), -1)};
  for (NodeId v : cover) {
    if (!ts.useful[v]) throw Infeasible("node " + net.name(v) + " cannot reach a sink");
  }
  // Product of candidate out-degrees over nodes reachable from the cover.
  std::vector<bool> seen(net.n(), false);
  std::vector<NodeId> stack;
  for (NodeId v : cover) {
    if (!seen[v]) {
      seen[v] = true;
      stack.push_back(v);
    }
  }
  double product = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (net.is_sink(v)) continue;
    int deg = 0;
    for (ArcId a : net.out_arcs(v)) {
      const NodeId w = net.head(a);
      if (!ts.useful[w]) continue;
      ++deg;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
    product *= std::max(deg, 1);
    if (product > static_cast<double>(guard)) {
      throw GuardExceeded("tree enumeration guard exceeded (product of out-degrees > " +
                          std::to_string(guard) + ")");
    }
  }
  ts.next_source(0);
}

void enumerate_confluent_trees(const Network& net,
                               const std::function<void(const ConfluentRouting&)>& visit,
                               std::int64_t guard) {
  enumerate_confluent_trees(net, net.sources(), visit, guard);
}

OracleResult oracle_quickest(const Network& net, std::int64_t guard) {
  OracleResult res;
  res.best_routing = empty_routing(net);
  bool found = false;
  enumerate_confluent_trees(
      net,
      [&](const ConfluentRouting& r) {
        ++res.instances_enumerated;
        const SimTrace tr =
            simulate(net, greedy_schedule(net, r, net.supplies()), SimOptions{10'000'000, false});
        if (!found || tr.makespan < res.best_time) {
          found = true;
          res.best_time = tr.makespan;
          res.best_routing = r;
        }
      },
      guard);
  res.best_value = net.total_supply();
  return res;
}

OracleResult oracle_maxflow_over_time(const Network& net, std::int64_t T, std::int64_t guard) {
  OracleResult res;
  res.best_routing = empty_routing(net);
  const auto useful = useful_nodes(net);
  std::vector<NodeId> cover;
  for (NodeId v : net.sources()) {
    if (useful[v]) cover.push_back(v);
  }
  bool found = false;
  enumerate_confluent_trees(
      net, cover,
      [&](const ConfluentRouting& r) {
        ++res.instances_enumerated;
        std::vector<Rat> values(net.n(), Rat(0));
        for (NodeId v : cover) values[v] = net.supply(v);
        const SimTrace tr =
            simulate(net, greedy_schedule(net, r, values), SimOptions{10'000'000, false});
        const Rat got = tr.delivered_by(T);
        if (!found || got > res.best_value) {
          found = true;
          res.best_value = got;
          res.best_routing = r;
        }
      },
      guard);
  res.best_time = T;
  return res;
}

OracleResult oracle_demand_max(const Network& net, std::int64_t guard) {
  OracleResult res;
  res.best_routing = empty_routing(net);
  const auto useful = useful_nodes(net);
  std::vector<NodeId> cover;
  for (NodeId v : net.sources()) {
    if (useful[v]) cover.push_back(v);
  }
  if (cover.size() > 20) throw GuardExceeded("too many sources for subset enumeration");
  enumerate_confluent_trees(
      net, cover,
      [&](const ConfluentRouting& r) {
        ++res.instances_enumerated;
        std::vector<std::vector<EdgeId>> edges(cover.size());
        for (std::size_t i = 0; i < cover.size(); ++i) {
          for (ArcId a : tree_path(net, r, cover[i]).arcs) edges[i].push_back(net.arc_edge(a));
        }
        for (std::uint32_t mask = 1; mask < (1u << cover.size()); ++mask) {
          Rat value = 0;
          std::map<EdgeId, Rat> load;
          bool ok = true;
          for (std::size_t i = 0; i < cover.size() && ok; ++i) {
            if (!(mask & (1u << i))) continue;
            const Rat& d = net.supply(cover[i]);
            value += d;
            for (EdgeId e : edges[i]) {
              Rat& l = load[e];
              l += d;
              if (l > net.edge(e).cap) {
                ok = false;
                break;
              }
            }
          }
          if (ok && value > res.best_value) {
            res.best_value = value;
            res.best_subset.clear();
            for (std::size_t i = 0; i < cover.size(); ++i) {
              if (mask & (1u << i)) res.best_subset.push_back(cover[i]);
            }
            res.best_routing = detail::restrict_routing(net, r, res.best_subset);
          }
        }
      },
      guard);
  return res;
}

namespace {

// Max flow value into the sink by time T over the tree's arcs.
Rat time_expanded_value(const Network& net, const ConfluentRouting& tree, std::int64_t T) {
  const std::vector<NodeId> sources = net.sources();
  const Rat total = net.total_supply();
  NetworkSpec spec;
  spec.directed = true;
  const int n = net.n();
  auto id = [&](NodeId v, std::int64_t tau) { return static_cast<NodeId>(tau * n + v); };
  for (std::int64_t tau = 0; tau <= T; ++tau) {
    for (NodeId v = 0; v < n; ++v) {
      spec.add_node(net.name(v) + "@" + std::to_string(tau), tau == 0 ? net.supply(v) : Rat(0));
    }
  }
  const NodeId super = spec.add_node("sink*");
  spec.sinks = {super};
  for (std::int64_t tau = 0; tau <= T; ++tau) {
    for (NodeId v = 0; v < n; ++v) {
      if (net.is_sink(v)) {
        spec.add_edge(id(v, tau), super, total, 0);
        continue;
      }
      if (tau < T) spec.add_edge(id(v, tau), id(v, tau + 1), total, 0);
      const ArcId a = tree.out_arc[v];
      if (a == kNone) continue;
      const std::int64_t arrive = tau + net.arc_len(a);
      if (arrive <= T) spec.add_edge(id(v, tau), id(net.head(a), arrive), net.arc_cap(a), 1);
    }
  }
  const Network te(std::move(spec));
  std::vector<Rat> caps(te.n(), Rat(0));
  for (NodeId v : sources) caps[id(v, 0)] = net.supply(v);
  return max_flow_value(te, caps, super);
}

}  // namespace

std::int64_t time_expanded_makespan(const Network& net, const ConfluentRouting& tree) {
  const Rat total = net.total_supply();
  if (total.is_zero()) return 0;
  std::int64_t hi = 1;
  while (time_expanded_value(net, tree, hi) < total) {
    hi *= 2;
    if (hi > (std::int64_t{1} << 20)) throw GuardExceeded("time-expanded horizon too large");
  }
  std::int64_t lo = 0;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (time_expanded_value(net, tree, mid) == total) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

std::int64_t oracle_quickest_time_expanded(const Network& net, std::int64_t guard) {
  std::int64_t best = -1;
  enumerate_confluent_trees(
      net,
      [&](const ConfluentRouting& r) {
        const std::int64_t t = time_expanded_makespan(net, r);
        if (best < 0 || t < best) best = t;
      },
      guard);
  return std::max<std::int64_t>(best, 0);
}

}  // namespace confluent
