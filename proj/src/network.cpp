#include "confluent/network.hpp"

#include <algorithm>

namespace confluent {

NodeId NetworkSpec::add_node(std::string name, Rat d) {
  nodes.push_back(std::move(name));
  supply.push_back(std::move(d));
  if (node_caps) node_caps->push_back(1);
  return static_cast<NodeId>(nodes.size()) - 1;
}

EdgeId NetworkSpec::add_edge(NodeId u, NodeId v, Rat cap, std::int64_t len) {
  edges.push_back(Edge{u, v, std::move(cap), len});
  return static_cast<EdgeId>(edges.size()) - 1;
}

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
  const int nn = n();
  spec_.supply.resize(nn, Rat(0));
  if (spec_.node_caps && static_cast<int>(spec_.node_caps->size()) != nn) {
    throw SchemaError("node_caps must list every node");
  }
  is_sink_.assign(nn, false);
  for (NodeId t : spec_.sinks) {
    if (t < 0 || t >= nn) throw SchemaError("sink index out of range");
    is_sink_[t] = true;
  }
  out_.assign(nn, {});
  in_.assign(nn, {});
  for (EdgeId e = 0; e < m(); ++e) {
    const Edge& ed = spec_.edges[e];
    if (ed.u < 0 || ed.u >= nn || ed.v < 0 || ed.v >= nn) {
      throw SchemaError("edge " + std::to_string(e) + " has an endpoint out of range");
    }
    out_[ed.u].push_back(2 * e);
    in_[ed.v].push_back(2 * e);
    if (!spec_.directed) {
      out_[ed.v].push_back(2 * e + 1);
      in_[ed.u].push_back(2 * e + 1);
    }
  }
  for (NodeId v = 0; v < nn; ++v) index_.emplace(spec_.nodes[v], v);
}

std::optional<NodeId> Network::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId Network::id(std::string_view name) const {
  auto v = find(name);
  if (!v) throw SchemaError("unknown node '" + std::string(name) + "'");
  return *v;
}

NodeId Network::sink() const {
  if (spec_.sinks.size() != 1) {
    throw PreconditionViolated("expected a single sink, found " +
                               std::to_string(spec_.sinks.size()));
  }
  return spec_.sinks.front();
}

std::vector<NodeId> Network::sources() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < n(); ++v) {
    if (supply(v).sign() > 0 && !is_sink(v)) out.push_back(v);
  }
  return out;
}

int Network::kappa() const { return static_cast<int>(sources().size()); }

Rat Network::total_supply() const {
  Rat s = 0;
  for (NodeId v : sources()) s += supply(v);
  return s;
}

Rat Network::c_min() const {
  if (m() == 0) return 0;
  Rat c = edge(0).cap;
  for (const Edge& e : spec_.edges) c = min(c, e.cap);
  return c;
}

Rat Network::c_max() const {
  Rat c = 0;
  for (const Edge& e : spec_.edges) c = max(c, e.cap);
  return c;
}

std::int64_t Network::total_length() const {
  std::int64_t s = 0;
  for (const Edge& e : spec_.edges) s += e.len;
  return s;
}

std::vector<NodeId> Path::nodes(const Network& net) const {
  std::vector<NodeId> out{start};
  for (ArcId a : arcs) out.push_back(net.head(a));
  return out;
}

NodeId Path::end(const Network& net) const {
  return arcs.empty() ? start : net.head(arcs.back());
}

std::int64_t Path::length(const Network& net) const {
  std::int64_t s = 0;
  for (ArcId a : arcs) s += net.arc_len(a);
  return s;
}

Rat PathFlow::value() const {
  Rat s = 0;
  for (const auto& p : paths) s += p.value;
  return s;
}

Rat Stream::total() const {
  Rat s = 0;
  for (const Release& r : schedule) s += r.rate * Rat(r.duration);
  return s;
}

Rat DynamicRouting::total() const {
  Rat s = 0;
  for (const Stream& st : streams) s += st.total();
  return s;
}

std::vector<Violation> validate(const Network& net) {
  std::vector<Violation> out;
  auto add = [&out](std::string el, std::string msg) {
    out.push_back(Violation{std::move(el), std::move(msg)});
  };
  if (net.n() == 0) add("nodes", "network has no nodes");
  if (net.sinks().empty()) add("sinks", "network has no sink");
  {
    std::unordered_map<std::string, int> count;
    for (NodeId v = 0; v < net.n(); ++v) {
      if (net.name(v).empty()) add("node " + std::to_string(v), "empty node name");
      if (++count[net.name(v)] == 2) add("node " + net.name(v), "duplicate node name");
    }
  }
  for (NodeId v = 0; v < net.n(); ++v) {
    if (net.supply(v).sign() < 0) add("node " + net.name(v), "negative supply");
    if (net.is_sink(v) && net.supply(v).sign() != 0) {
      add("node " + net.name(v), "sink carries supply");
    }
    if (net.has_node_caps() && net.node_cap(v).sign() <= 0) {
      add("node " + net.name(v), "non-positive node capacity");
    }
  }
  for (EdgeId e = 0; e < net.m(); ++e) {
    const Edge& ed = net.edge(e);
    const std::string el = "edge " + std::to_string(e) + " (" + net.name(ed.u) + "," +
                           net.name(ed.v) + ")";
    if (ed.cap.sign() <= 0) add(el, "non-positive capacity");
    if (ed.len < 0) add(el, "negative length");
    if (ed.u == ed.v) add(el, "self-loop");
  }
  if (net.monotone()) {
    if (!net.has_node_caps()) {
      add("node_caps", "monotone network without node capacities");
    } else {
      for (EdgeId e = 0; e < net.m(); ++e) {
        const Edge& ed = net.edge(e);
        const bool bad = net.node_cap(ed.u) > net.node_cap(ed.v) ||
                         (!net.directed() && net.node_cap(ed.u) != net.node_cap(ed.v));
        if (bad) {
          add("edge " + std::to_string(e) + " (" + net.name(ed.u) + "," + net.name(ed.v) + ")",
              "monotonicity violated: capacity " + net.node_cap(ed.u).str() + " -> " +
                  net.node_cap(ed.v).str());
        }
      }
    }
  }
  return out;
}

std::vector<Violation> check_path(const Network& net, const Path& p) {
  std::vector<Violation> out;
  if (p.start < 0 || p.start >= net.n()) {
    out.push_back({"path", "start node out of range"});
    return out;
  }
  NodeId at = p.start;
  for (std::size_t i = 0; i < p.arcs.size(); ++i) {
    const ArcId a = p.arcs[i];
    if (!net.arc_exists(a)) {
      out.push_back({"path arc " + std::to_string(i), "arc does not exist"});
      return out;
    }
    if (net.tail(a) != at) {
      out.push_back({"path arc " + std::to_string(i), "arc does not continue the path"});
      return out;
    }
    at = net.head(a);
  }
  if (!net.is_sink(at)) out.push_back({"path", "path does not end at a sink"});
  return out;
}

std::vector<Violation> check_confluent(const Network& net, const ConfluentRouting& r,
                                       const std::vector<NodeId>& must_route) {
  std::vector<Violation> out;
  if (static_cast<int>(r.out_arc.size()) != net.n()) {
    out.push_back({"routing", "routing size does not match node count"});
    return out;
  }
  for (NodeId v = 0; v < net.n(); ++v) {
    const ArcId a = r.out_arc[v];
    if (a == kNone) continue;
    if (!net.arc_exists(a) || net.tail(a) != v) {
      out.push_back({"node " + net.name(v), "chosen arc does not leave the node"});
    } else if (net.is_sink(v)) {
      out.push_back({"node " + net.name(v), "sink has an out-arc"});
    }
  }
  if (!out.empty()) return out;
  // 0 unvisited, 1 on stack, 2 reaches a sink, 3 dead end or cycle.
  std::vector<int> state(net.n(), 0);
  for (NodeId v = 0; v < net.n(); ++v) {
    if (state[v] != 0) continue;
    std::vector<NodeId> stack;
    NodeId at = v;
    int verdict = 0;
    while (true) {
      if (state[at] == 2 || state[at] == 3) {
        verdict = state[at];
        break;
      }
      if (state[at] == 1) {
        out.push_back({"node " + net.name(at), "routing contains a cycle"});
        verdict = 3;
        break;
      }
      if (net.is_sink(at)) {
        state[at] = 2;
        verdict = 2;
        break;
      }
      state[at] = 1;
      stack.push_back(at);
      if (r.out_arc[at] == kNone) {
        verdict = 3;
        break;
      }
      at = net.head(r.out_arc[at]);
    }
    for (NodeId u : stack) state[u] = verdict;
  }
  for (NodeId v : must_route) {
    if (state[v] != 2) out.push_back({"node " + net.name(v), "does not reach a sink"});
  }
  return out;
}

Path tree_path(const Network& net, const ConfluentRouting& r, NodeId v) {
  Path p;
  p.start = v;
  NodeId at = v;
  int steps = 0;
  while (!net.is_sink(at)) {
    const ArcId a = r.out_arc[at];
    if (a == kNone) throw PathError("node " + net.name(at) + " has no out-arc");
    p.arcs.push_back(a);
    at = net.head(a);
    if (++steps > net.n()) throw PathError("routing cycle through " + net.name(at));
  }
  return p;
}

bool reaches_sink(const Network& net, const ConfluentRouting& r, NodeId v) {
  NodeId at = v;
  for (int steps = 0; steps <= net.n(); ++steps) {
    if (net.is_sink(at)) return true;
    if (r.out_arc[at] == kNone) return false;
    at = net.head(r.out_arc[at]);
  }
  return false;
}

namespace {

void check_values(const Network& net, const std::vector<Rat>& values) {
  if (values.size() != static_cast<std::size_t>(net.n())) {
    throw PreconditionViolated("expected one value per node");
  }
}

}  // namespace

PathFlow routing_flow(const Network& net, const ConfluentRouting& r,
                      const std::vector<Rat>& values) {
  check_values(net, values);
  PathFlow f;
  for (NodeId v = 0; v < net.n(); ++v) {
    if (values[v].sign() > 0) f.paths.push_back({tree_path(net, r, v), values[v]});
  }
  return f;
}

DynamicRouting greedy_schedule(const Network& net, const ConfluentRouting& r,
                               const std::vector<Rat>& values) {
  check_values(net, values);
  DynamicRouting dr;
  dr.tree = r;
  for (NodeId v = 0; v < net.n(); ++v) {
    if (values[v].sign() <= 0) continue;
    Stream s;
    s.source = v;
    s.path = tree_path(net, r, v);
    s.schedule.push_back(Release{0, values[v], 1});
    dr.streams.push_back(std::move(s));
  }
  return dr;
}

ConfluentRouting empty_routing(const Network& net) {
  return ConfluentRouting{std::vector<ArcId>(net.n(), kNone)};
}

Rat node_congestion(const Network& net, const std::vector<Rat>& node_out) {
  Rat nc = 0;
  for (NodeId v = 0; v < net.n(); ++v) {
    if (net.is_sink(v)) continue;
    const Rat c = net.has_node_caps() ? net.node_cap(v) : Rat(1);
    nc = max(nc, node_out[v] / c);
  }
  return nc;
}

FlowStats flow_stats(const Network& net, const PathFlow& f) {
  FlowStats s;
  s.arc_flow.assign(net.num_arcs(), Rat(0));
  s.edge_flow.assign(net.m(), Rat(0));
  s.node_out.assign(net.n(), Rat(0));
  s.delivered.assign(net.n(), Rat(0));
  for (const FlowPath& fp : f.paths) {
    auto bad = check_path(net, fp.path);
    if (!bad.empty()) throw PathError(bad.front().element + ": " + bad.front().message);
    s.delivered[fp.path.start] += fp.value;
    s.value += fp.value;
    s.length = std::max(s.length, fp.path.length(net));
    for (ArcId a : fp.path.arcs) {
      s.arc_flow[a] += fp.value;
      s.node_out[net.tail(a)] += fp.value;
    }
  }
  for (ArcId a = 0; a < net.num_arcs(); ++a) s.edge_flow[a / 2] += s.arc_flow[a];
  for (EdgeId e = 0; e < net.m(); ++e) s.ec = max(s.ec, s.edge_flow[e] / net.edge(e).cap);
  if (net.has_node_caps()) s.nc = node_congestion(net, s.node_out);
  return s;
}

}  // namespace confluent
