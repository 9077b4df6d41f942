#include "confluent/monotonic.hpp"

#include "confluent/staticflow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace confluent {

namespace {

struct ClassBuilder {
  int level = 0;
  NetworkSpec spec;
  std::vector<NodeId> global;
  std::vector<Rat> induced;
  std::vector<bool> sink;
  std::unordered_map<NodeId, NodeId> node_of;   // original node -> local
  std::unordered_map<ArcId, NodeId> dummy_of;   // jump arc -> local dummy
  std::unordered_map<ArcId, EdgeId> edge_of;    // original arc -> local edge
  std::vector<ArcId> arc_origin;
  PathFlow flow;

  NodeId node(const Network& net, NodeId v, bool is_sink) {
    auto it = node_of.find(v);
    if (it != node_of.end()) return it->second;
    const NodeId id = spec.add_node(net.name(v));
    global.push_back(v);
    induced.push_back(0);
    sink.push_back(is_sink);
    node_of.emplace(v, id);
    return id;
  }

  NodeId dummy(const Network& net, ArcId a, std::vector<DummyNode>& registry) {
    auto it = dummy_of.find(a);
    if (it != dummy_of.end()) return it->second;
    registry.push_back({a, level + 1});
    const NodeId id = spec.add_node(net.name(net.tail(a)) + "~" + net.name(net.head(a)));
    global.push_back(kNone);
    induced.push_back(0);
    sink.push_back(true);
    dummy_of.emplace(a, id);
    return id;
  }

  EdgeId edge(ArcId a, NodeId lu, NodeId lv) {
    auto it = edge_of.find(a);
    if (it != edge_of.end()) return it->second;
    const EdgeId e = spec.add_edge(lu, lv, 1, 0);
    arc_origin.push_back(a);
    edge_of.emplace(a, e);
    return e;
  }
};

}  // namespace

Int default_base(int x) {
  const double l = std::log2(std::max(x, 2));
  const double b = std::ceil(l * l * l * l - 1e-9);
  return Int(std::max<long long>(2, static_cast<long long>(b)));
}

Network scale_node_caps(const Network& net, const Rat& factor) {
  NetworkSpec spec = net.spec();
  if (spec.node_caps) {
    for (Rat& c : *spec.node_caps) c *= factor;
  }
  return Network(std::move(spec));
}

ClassDecomposition decompose_classes(const Network& net, const PathFlow& f, const Int& base) {
  if (base < 2) throw PreconditionViolated("class base must be at least 2");
  if (!net.monotone() || !net.has_node_caps()) {
    throw PreconditionViolated("network is not flagged monotone with node capacities");
  }
  for (const Violation& v : validate(net)) {
    throw PreconditionViolated(v.element + ": " + v.message);
  }
  const PathFlow g = cancel_cycles(net, f);
  const FlowStats st = flow_stats(net, g);
  for (NodeId v : net.sources()) {
    if (st.delivered[v] != net.supply(v)) {
      throw PreconditionViolated("flow does not route the supply of " + net.name(v));
    }
  }
  if (st.nc && *st.nc > Rat(1)) {
    throw PreconditionViolated("flow has node congestion " + st.nc->str() + " > 1");
  }

  ClassDecomposition dec;
  dec.base = base;
  dec.scale = net.node_cap(0);
  for (NodeId v = 0; v < net.n(); ++v) dec.scale = min(dec.scale, net.node_cap(v));
  dec.level.resize(net.n());
  int lo = 0, hi = 0;
  for (NodeId v = 0; v < net.n(); ++v) {
    dec.level[v] = ceil_log(net.node_cap(v) / dec.scale, base);
    if (v == 0 || dec.level[v] < lo) lo = dec.level[v];
    if (v == 0 || dec.level[v] > hi) hi = dec.level[v];
  }
  dec.r = hi - lo + 1;

  std::map<int, ClassBuilder> builders;
  auto builder = [&builders](int level) -> ClassBuilder& {
    auto [it, fresh] = builders.try_emplace(level);
    if (fresh) {
      it->second.level = level;
      it->second.spec.directed = true;
    }
    return it->second;
  };
  for (const FlowPath& fp : g.paths) {
    NodeId at = fp.path.start;
    std::size_t k = 0;
    while (k < fp.path.arcs.size()) {
      const int i = dec.level[at];
      ClassBuilder& b = builder(i);
      const NodeId start = b.node(net, at, false);
      b.induced[start] += fp.value;
      Path seg;
      seg.start = start;
      NodeId lu = start;
      while (k < fp.path.arcs.size()) {
        const ArcId a = fp.path.arcs[k++];
        const NodeId w = net.head(a);
        const int lw = dec.level[w];
        NodeId lv;
        bool ends = true;
        if (lw > i + 1) {
          lv = b.dummy(net, a, dec.dummy_nodes);
        } else if (lw == i + 1 || net.is_sink(w)) {
          lv = b.node(net, w, true);
        } else {
          lv = b.node(net, w, false);
          ends = false;
        }
        seg.arcs.push_back(2 * b.edge(a, lu, lv));
        lu = lv;
        at = w;
        if (ends) break;
      }
      b.flow.paths.push_back({std::move(seg), fp.value});
    }
  }
  for (auto& [level, b] : builders) {
    CapacityClass c;
    c.level = level;
    for (NodeId v = 0; v < static_cast<NodeId>(b.global.size()); ++v) {
      if (b.sink[v]) {
        b.spec.sinks.push_back(v);
      } else if (b.induced[v].sign() > 0) {
        b.spec.supply[v] = 1;
        const NodeId gv = b.global[v];
        if (net.supply(gv).sign() > 0) ++c.original_sources;
        if (b.induced[v] != net.supply(gv)) ++c.induced_sources;
      }
    }
    c.net = Network(std::move(b.spec));
    c.global = std::move(b.global);
    c.arc_origin = std::move(b.arc_origin);
    c.induced = std::move(b.induced);
    c.flow = std::move(b.flow);
    dec.classes.push_back(std::move(c));
  }
  return dec;
}

MonotoneResult route_monotone(const Network& net, const PathFlow& f, const Int& base, int trials,
                              std::uint64_t seed, int jobs) {
  MonotoneResult res;
  res.decomposition = decompose_classes(net, f, base);
  const ClassDecomposition& dec = res.decomposition;
  res.routing = empty_routing(net);
  for (const CapacityClass& c : dec.classes) {
    const FlowDag dag = induce_dag(c.net, c.flow);
    const RoundResult rr =
        round_best(c.net, dag, trials, trial_seed(seed, 0x10000u + static_cast<unsigned>(c.level)), jobs);
    for (NodeId u = 0; u < c.net.n(); ++u) {
      const ArcId a = rr.routing.out_arc[u];
      if (a == kNone || c.global[u] == kNone) continue;
      res.routing.out_arc[c.global[u]] = c.arc_origin[c.net.arc_edge(a)];
    }
    ClassStat cs;
    cs.level = c.level;
    cs.rounding_congestion = rr.diag.max_congestion;
    cs.induced_sources = c.induced_sources;
    cs.original_sources = c.original_sources;
    res.classes.push_back(cs);
  }
  res.flow = routing_flow(net, res.routing, net.supplies());
  const FlowStats st = flow_stats(net, res.flow);
  res.nc = node_congestion(net, st.node_out);
  res.length = st.length;
  std::vector<Rat> rounded(net.n());
  for (NodeId v = 0; v < net.n(); ++v) {
    rounded[v] = dec.scale * pow(Rat(dec.base), dec.level[v]);
    if (!net.is_sink(v)) res.nc_rounded = max(res.nc_rounded, st.node_out[v] / rounded[v]);
  }
  for (std::size_t k = 0; k < dec.classes.size(); ++k) {
    const CapacityClass& c = dec.classes[k];
    for (NodeId u = 0; u < c.net.n(); ++u) {
      const NodeId gv = c.global[u];
      if (!c.net.is_sink(u) || gv == kNone) continue;
      // Flow through an original sink is its in-flow.
      Rat load = st.node_out[gv];
      if (net.is_sink(gv)) {
        load = 0;
        for (ArcId a : net.in_arcs(gv)) load += st.arc_flow[a];
      }
      res.classes[k].sink_congestion = max(res.classes[k].sink_congestion, load / rounded[gv]);
    }
  }
  return res;
}

MonotoneResult route_monotone_relaxed(const Network& net, const Int& base, int trials,
                                      std::uint64_t seed, int jobs) {
  const NodeId t = net.sink();
  if (!net.has_node_caps()) throw PreconditionViolated("network has no node capacities");
  Rat cmin = net.node_cap(0);
  Rat dmax = 0;
  for (NodeId v = 0; v < net.n(); ++v) {
    cmin = min(cmin, net.node_cap(v));
    dmax = max(dmax, net.supply(v));
  }
  if (dmax > cmin) {
    throw PreconditionViolated("no-bottleneck assumption fails: supply " + dmax.str() +
                               " exceeds node capacity " + cmin.str());
  }
  const NodeSplit ns = node_to_edge_capacitated(net);
  const PathFlow zeta = unsplittable_flow(ns.net, ns.net.supplies(), ns.in[t]);
  const PathFlow f = map_back(net, ns, zeta);
  const Network doubled = scale_node_caps(net, 2);
  const Int b = base >= 2 ? base : default_base(net.kappa());
  MonotoneResult res = route_monotone(doubled, f, b, trials, seed, jobs);
  res.nc = node_congestion(net, flow_stats(net, res.flow).node_out);
  return res;
}

}  // namespace confluent
