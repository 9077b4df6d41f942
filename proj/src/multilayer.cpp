#include "confluent/multilayer.hpp"

#include "confluent/staticflow.hpp"
#include "internal.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace confluent {

SupplyGroups group_supplies(const Network& net, const std::vector<Rat>& demands) {
  SupplyGroups sg;
  std::vector<NodeId> srcs;
  for (NodeId v = 0; v < net.n() && v < static_cast<NodeId>(demands.size()); ++v) {
    if (demands[v].sign() > 0 && !net.is_sink(v)) {
      srcs.push_back(v);
      sg.d_max = max(sg.d_max, demands[v]);
    }
  }
  if (srcs.empty()) return sg;
  const Rat threshold = sg.d_max / Rat(2 * static_cast<long long>(srcs.size()));
  std::map<int, std::vector<NodeId>> by_exp;
  for (NodeId v : srcs) {
    if (demands[v] <= threshold) {
      sg.dropped.push_back(v);
      continue;
    }
    by_exp[ceil_log2(demands[v])].push_back(v);
  }
  for (auto& [e, vs] : by_exp) sg.groups.push_back({e, pow2(e), std::move(vs)});
  return sg;
}

PreparedGroup prepare_group(const Network& net, const SupplyGroup& group, int kappa,
                            const Rat& d_max) {
  PreparedGroup pg;
  pg.unit = group.size;
  const Rat clamp = pow2(ceil_log2(Rat(kappa) * d_max));
  NetworkSpec spec;
  spec.directed = net.directed();
  for (NodeId v = 0; v < net.n(); ++v) spec.add_node(net.name(v));
  for (NodeId v : group.sources) spec.supply[v] = 1;
  spec.sinks = net.sinks();
  for (EdgeId e = 0; e < net.m(); ++e) {
    const Edge& ed = net.edge(e);
    const Rat c = min(pow2(ceil_log2(ed.cap)), clamp);
    if (c < group.size) continue;
    spec.add_edge(ed.u, ed.v, c / group.size, ed.len);
    pg.origin.push_back(e);
  }
  pg.net = Network(std::move(spec));
  return pg;
}

LayeredNetwork build_layers(const Network& base) {
  const NodeId t = base.sink();
  Rat cmax = 1;
  for (EdgeId e = 0; e < base.m(); ++e) {
    const Rat& c = base.edge(e).cap;
    if (c < Rat(1) || pow2(floor_log2(c)) != c) {
      throw PreconditionViolated("layer construction needs power-of-two capacities >= 1");
    }
    cmax = max(cmax, c);
  }
  LayeredNetwork L;
  L.k = floor_log2(cmax) + 1;
  const int k = L.k;
  NetworkSpec spec;
  spec.directed = true;
  spec.monotone = true;
  spec.node_caps = std::vector<Rat>{};
  auto node = [&](std::string name, NodeId base_v, int layer, const Rat& cap, const Rat& supply,
                  bool dummy) {
    const NodeId id = spec.add_node(std::move(name), supply);
    spec.node_caps->back() = cap;
    L.base_node.push_back(base_v);
    L.layer.push_back(layer);
    L.dummy_sink.push_back(dummy);
    return id;
  };
  auto arc = [&](NodeId u, NodeId v, const Rat& cap, std::int64_t len, LayerArc kind, ArcId ba,
                 EdgeId chain) {
    spec.add_edge(u, v, cap, len);
    L.kind.push_back(kind);
    L.base_arc.push_back(ba);
    L.chain_of.push_back(chain);
  };
  L.copy.assign(static_cast<std::size_t>(base.n()) * k, kNone);
  for (int i = 0; i < k; ++i) {
    for (NodeId v = 0; v < base.n(); ++v) {
      if (v == t) continue;
      L.copy[static_cast<std::size_t>(v) * k + i] =
          node(base.name(v) + "@" + std::to_string(i), v, i, pow2(i),
               i == 0 ? base.supply(v) : Rat(0), false);
    }
  }
  const NodeId th = node(base.name(t), t, -1, pow2(k - 1), 0, false);
  spec.sinks = {th};
  for (ArcId a = 0; a < base.num_arcs(); ++a) {
    if (!base.arc_exists(a)) continue;
    const NodeId u = base.tail(a);
    const NodeId w = base.head(a);
    if (base.is_sink(u)) continue;
    const int top = floor_log2(base.arc_cap(a));
    const std::int64_t len = base.arc_len(a);
    if (w == t) {
      const EdgeId e = base.arc_edge(a);
      std::vector<NodeId> chain;
      for (int j = top; j < k; ++j) {
        chain.push_back(node(base.name(t) + "[" + base.name(u) + "#" + std::to_string(e) + "]@" +
                                 std::to_string(j),
                             t, j, pow2(j), 0, true));
      }
      arc(L.at(u, top), chain.front(), pow2(top), len, LayerArc::SinkEntry, a, e);
      for (int j = top; j + 1 < k; ++j) {
        arc(chain[j - top], chain[j - top + 1], pow2(j), 0, LayerArc::SinkChain, kNone, e);
      }
      arc(chain.back(), th, pow2(k - 1), 0, LayerArc::SinkExit, kNone, e);
      continue;
    }
    if (base.is_sink(w)) continue;
    for (int i = 0; i <= top; ++i) {
      arc(L.at(u, i), L.at(w, i), pow2(i), len, LayerArc::Vertical, a, kNone);
    }
  }
  for (NodeId v = 0; v < base.n(); ++v) {
    if (v == t) continue;
    for (int i = 0; i + 1 < k; ++i) {
      arc(L.at(v, i), L.at(v, i + 1), pow2(i), 0, LayerArc::Horizontal, kNone, kNone);
    }
  }
  L.h = Network(std::move(spec));
  const auto bad = validate(L.h);
  if (!bad.empty()) throw Error("layered network invalid: " + bad.front().element + ": " + bad.front().message);
  return L;
}

LayerRouting route_layers(const LayeredNetwork& H, std::optional<std::int64_t> budget,
                          const Int& base, int trials, std::uint64_t seed, int jobs) {
  const NodeSplit ns = node_to_edge_capacitated(H.h);
  const NodeId t = ns.in[H.h.sink()];
  const std::vector<Rat>& demands = ns.net.supplies();
  PathFlow split;
  if (budget) {
    auto f = length_bounded_flow(ns.net, demands, t, *budget);
    if (!f) throw Infeasible("no length-bounded splittable flow on the layered network");
    split = std::move(*f);
  } else {
    split = max_flow(ns.net, demands, t);
    if (split.value() != ns.net.total_supply()) {
      throw Infeasible("no splittable flow on the layered network");
    }
  }
  const PathFlow f = map_back(H.h, ns, split);
  const Int b = base >= 2 ? base : default_base(H.h.n());
  MonotoneResult mr = route_monotone(H.h, f, b, trials, seed, jobs);
  LayerRouting lr;
  lr.routing = std::move(mr.routing);
  lr.flow = std::move(mr.flow);
  lr.nc = mr.nc;
  lr.length = mr.length;
  lr.classes = std::move(mr.classes);
  return lr;
}

namespace {

struct Departure {
  NodeId node;
  int layer;
  ArcId arc;
};

std::vector<int> kept_under(const std::vector<std::vector<Departure>>& deps,
                            const std::vector<int>& commit) {
  std::vector<int> kept;
  for (std::size_t s = 0; s < deps.size(); ++s) {
    bool ok = true;
    for (const Departure& d : deps[s]) {
      if (commit[d.node] != d.layer) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(static_cast<int>(s));
  }
  return kept;
}

}  // namespace

RerouteResult reroute_to_base(const Network& base, const LayeredNetwork& H, const LayerRouting& h,
                              std::uint64_t seed) {
  RerouteResult res;
  const int k = H.k;
  std::vector<NodeId> srcs;
  std::vector<std::vector<Departure>> deps;
  for (NodeId v : base.sources()) {
    srcs.push_back(v);
    const Path p = tree_path(H.h, h.routing, H.at(v, 0));
    std::vector<Departure> d;
    for (ArcId a : p.arcs) {
      const EdgeId e = H.h.arc_edge(a);
      if (H.kind[e] == LayerArc::Vertical || H.kind[e] == LayerArc::SinkEntry) {
        const NodeId hu = H.h.tail(a);
        d.push_back({H.base_node[hu], H.layer[hu], H.base_arc[e]});
      }
    }
    deps.push_back(std::move(d));
  }
  std::vector<std::vector<int>> options(base.n());
  for (const auto& d : deps) {
    for (const Departure& x : d) {
      auto& o = options[x.node];
      if (std::find(o.begin(), o.end(), x.layer) == o.end()) o.push_back(x.layer);
    }
  }
  for (auto& o : options) std::sort(o.begin(), o.end());
  std::vector<int> commit(base.n(), -1);
  for (NodeId v = 0; v < base.n(); ++v) {
    if (!options[v].empty()) commit[v] = options[v].front();
  }
  std::vector<int> kept = kept_under(deps, commit);
  const auto meets = [&](std::size_t count) {
    return static_cast<std::int64_t>(count) * (2 * k - 1) >= static_cast<std::int64_t>(srcs.size());
  };
  if (!meets(kept.size())) {
    res.searched = true;
    std::vector<NodeId> conflicted;
    for (NodeId v = 0; v < base.n(); ++v) {
      if (options[v].size() > 1) conflicted.push_back(v);
    }
    if (static_cast<std::int64_t>(k) * static_cast<std::int64_t>(conflicted.size()) <= 20) {
      std::vector<std::size_t> idx(conflicted.size(), 0);
      std::vector<int> trial = commit;
      while (true) {
        for (std::size_t j = 0; j < conflicted.size(); ++j) {
          trial[conflicted[j]] = options[conflicted[j]][idx[j]];
        }
        std::vector<int> got = kept_under(deps, trial);
        if (got.size() > kept.size()) {
          kept = std::move(got);
          commit = trial;
        }
        std::size_t j = 0;
        while (j < idx.size() && ++idx[j] == options[conflicted[j]].size()) idx[j++] = 0;
        if (j == idx.size()) break;
      }
    } else {
      std::mt19937_64 rng(seed);
      std::vector<int> order(srcs.size());
      std::iota(order.begin(), order.end(), 0);
      for (int round = 0; round < 256 && !meets(kept.size()); ++round) {
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<int> trial(base.n(), -1);
        for (int s : order) {
          bool ok = true;
          for (const Departure& d : deps[s]) {
            if (trial[d.node] != -1 && trial[d.node] != d.layer) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          for (const Departure& d : deps[s]) trial[d.node] = d.layer;
        }
        for (NodeId v = 0; v < base.n(); ++v) {
          if (trial[v] == -1 && !options[v].empty()) trial[v] = options[v].front();
        }
        std::vector<int> got = kept_under(deps, trial);
        if (got.size() > kept.size()) {
          kept = std::move(got);
          commit = trial;
        }
      }
    }
  }
  res.routing = empty_routing(base);
  std::vector<bool> is_kept(srcs.size(), false);
  for (int s : kept) {
    is_kept[s] = true;
    for (const Departure& d : deps[s]) res.routing.out_arc[d.node] = d.arc;
  }
  PathFlow pf;
  for (std::size_t s = 0; s < srcs.size(); ++s) {
    if (is_kept[s]) {
      res.kept.push_back(srcs[s]);
      pf.paths.push_back({tree_path(base, res.routing, srcs[s]), Rat(1)});
    } else {
      res.discarded.push_back(srcs[s]);
    }
  }
  res.commit.assign(base.n(), -1);
  for (NodeId v = 0; v < base.n(); ++v) {
    if (res.routing.out_arc[v] != kNone) res.commit[v] = commit[v];
  }
  const FlowStats st = flow_stats(base, pf);
  res.ec = st.ec;
  res.length = st.length;
  for (NodeId v = 0; v < base.n(); ++v) {
    if (res.commit[v] >= 0) res.nc = max(res.nc, st.node_out[v] / pow2(res.commit[v]));
  }
  return res;
}

std::vector<NodeId> select_demands_on_tree(const Network& net, const ConfluentRouting& tree,
                                           const std::vector<NodeId>& items,
                                           const std::vector<Rat>& gamma,
                                           const std::vector<Rat>& demands) {
  const std::size_t n = items.size();
  std::vector<std::vector<EdgeId>> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (ArcId a : tree_path(net, tree, items[i]).arcs) edges[i].push_back(net.arc_edge(a));
  }
  auto fits = [&](const std::vector<std::size_t>& chosen) {
    std::map<EdgeId, Rat> load;
    for (std::size_t i : chosen) {
      for (EdgeId e : edges[i]) {
        Rat& l = load[e];
        l += demands[items[i]];
        if (l > net.edge(e).cap) return false;
      }
    }
    return true;
  };
  auto value = [&](const std::vector<std::size_t>& chosen) {
    Rat v = 0;
    for (std::size_t i : chosen) v += demands[items[i]];
    return v;
  };
  std::vector<std::size_t> best;
  if (n <= 16) {
    Rat best_value = -1;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::size_t> chosen;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) chosen.push_back(i);
      }
      const Rat v = value(chosen);
      if (v > best_value && fits(chosen)) {
        best_value = v;
        best = std::move(chosen);
      }
    }
  } else {
    auto greedy = [&](auto key) {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return key(a) > key(b); });
      std::vector<std::size_t> chosen;
      for (std::size_t i : order) {
        chosen.push_back(i);
        if (!fits(chosen)) chosen.pop_back();
      }
      return chosen;
    };
    auto by_gamma = greedy([&](std::size_t i) { return gamma[i] * demands[items[i]]; });
    auto by_size = greedy([&](std::size_t i) { return demands[items[i]]; });
    best = value(by_size) > value(by_gamma) ? by_size : by_gamma;
  }
  std::vector<NodeId> out;
  for (std::size_t i : best) out.push_back(items[i]);
  std::sort(out.begin(), out.end());
  return out;
}

StaticResult demand_max_static(const Network& net, const std::vector<Rat>& demands,
                               const PipelineOptions& opt) {
  StaticResult res;
  const NodeId t = net.sink();
  res.routing = empty_routing(net);
  res.grouping = group_supplies(net, demands);
  int kappa = 0;
  for (NodeId v = 0; v < net.n() && v < static_cast<NodeId>(demands.size()); ++v) {
    if (demands[v].sign() > 0 && !net.is_sink(v)) ++kappa;
  }
  for (NodeId v : res.grouping.dropped) res.dropped_value += demands[v];
  const auto dist = detail::distances_to(net, t);
  const std::int64_t reach = opt.budget ? *opt.budget : detail::kUnreachable - 1;
  std::vector<bool> unreachable(net.n(), false);
  for (const SupplyGroup& g : res.grouping.groups) {
    for (NodeId v : g.sources) {
      if (dist[v] > reach) {
        unreachable[v] = true;
        res.unreachable_value += demands[v];
      }
    }
  }

  struct Outcome {
    ConfluentRouting routing;
    std::vector<NodeId> delivered;
    std::vector<NodeId> kept;
    std::vector<NodeId> considered;
  };
  std::vector<Outcome> outcomes(res.grouping.groups.size());
  for (std::size_t gi = 0; gi < res.grouping.groups.size(); ++gi) {
    const SupplyGroup& g = res.grouping.groups[gi];
    GroupReport rep;
    rep.size = g.size;
    SupplyGroup members{g.exponent, g.size, {}};
    for (NodeId v : g.sources) {
      if (!unreachable[v]) members.sources.push_back(v);
    }
    // Sources cut off by deleted low-capacity edges or the budget.
    {
      PreparedGroup probe = prepare_group(net, members, kappa, res.grouping.d_max);
      const auto d2 = detail::distances_to(probe.net, t);
      std::vector<NodeId> ok;
      for (NodeId v : members.sources) {
        if (d2[v] <= reach) {
          ok.push_back(v);
        } else {
          unreachable[v] = true;
          res.unreachable_value += demands[v];
        }
      }
      members.sources = std::move(ok);
    }
    outcomes[gi].considered = members.sources;
    rep.sources = static_cast<int>(members.sources.size());
    if (members.sources.empty()) {
      res.groups.push_back(rep);
      continue;
    }
    const PreparedGroup pg = prepare_group(net, members, kappa, res.grouping.d_max);
    const LayeredNetwork H = build_layers(pg.net);
    rep.k = H.k;
    const std::uint64_t gseed = trial_seed(opt.seed, 0x20000u + gi);
    LayerRouting lr;
    bool routed = false;
    const int max_doublings = ceil_log2(Rat(static_cast<long long>(members.sources.size()))) + 2;
    for (int j = 0; j <= max_doublings && !routed; ++j) {
      LayeredNetwork Hj = H;
      if (j > 0) Hj.h = scale_node_caps(H.h, pow2(j));
      try {
        lr = route_layers(Hj, opt.budget, opt.base, opt.trials, gseed, opt.jobs);
        rep.cap_doublings = j;
        routed = true;
      } catch (const Infeasible&) {
      }
    }
    if (!routed) {
      res.groups.push_back(rep);
      continue;
    }
    rep.feasible = true;
    rep.nc_h = node_congestion(H.h, flow_stats(H.h, lr.flow).node_out);
    const RerouteResult rr = reroute_to_base(pg.net, H, lr, gseed);
    ConfluentRouting orig = empty_routing(net);
    for (NodeId v = 0; v < net.n(); ++v) {
      const ArcId a = rr.routing.out_arc[v];
      if (a != kNone) orig.out_arc[v] = 2 * pg.origin[pg.net.arc_edge(a)] + (a & 1);
    }
    rep.kept = static_cast<int>(rr.kept.size());
    for (NodeId v : rr.kept) rep.kept_value += demands[v];
    std::vector<NodeId> chosen = rr.kept;
    if (!rr.kept.empty()) {
      PathFlow pf;
      for (NodeId v : rr.kept) pf.paths.push_back({tree_path(net, orig, v), demands[v]});
      rep.kept_ec = flow_stats(net, pf).ec;
    }
    if (opt.select && !rr.kept.empty()) {
      const Rat gamma = rep.kept_ec > Rat(1) ? Rat(1) / rep.kept_ec : Rat(1);
      chosen = select_demands_on_tree(net, orig, rr.kept, std::vector<Rat>(rr.kept.size(), gamma),
                                      demands);
    }
    outcomes[gi].kept = rr.kept;
    outcomes[gi].delivered = chosen;
    outcomes[gi].routing = detail::restrict_routing(net, orig, chosen);
    PathFlow pf;
    for (NodeId v : chosen) {
      pf.paths.push_back({tree_path(net, outcomes[gi].routing, v), demands[v]});
      rep.selected_value += demands[v];
    }
    const FlowStats st = flow_stats(net, pf);
    rep.ec = st.ec;
    rep.length = st.length;
    res.groups.push_back(rep);
  }
  for (std::size_t gi = 0; gi < res.groups.size(); ++gi) {
    if (!res.groups[gi].feasible) continue;
    if (res.best_group < 0 || res.groups[gi].selected_value > res.value) {
      res.best_group = static_cast<int>(gi);
      res.value = res.groups[gi].selected_value;
    }
  }
  if (res.best_group < 0) {
    for (const SupplyGroup& g : res.grouping.groups) {
      for (NodeId v : g.sources) {
        if (!unreachable[v]) res.other_groups_value += demands[v];
      }
    }
    return res;
  }
  res.infeasible = false;
  const Outcome& best = outcomes[res.best_group];
  const GroupReport& br = res.groups[res.best_group];
  res.routing = best.routing;
  res.delivered = best.delivered;
  res.ec = br.ec;
  res.length = br.length;
  for (std::size_t gi = 0; gi < res.grouping.groups.size(); ++gi) {
    if (static_cast<int>(gi) == res.best_group) continue;
    for (NodeId v : res.grouping.groups[gi].sources) {
      if (!unreachable[v]) res.other_groups_value += demands[v];
    }
  }
  for (NodeId v : best.considered) {
    const bool kept = std::find(best.kept.begin(), best.kept.end(), v) != best.kept.end();
    const bool sel = std::find(best.delivered.begin(), best.delivered.end(), v) != best.delivered.end();
    if (!kept) res.reroute_discarded_value += demands[v];
    else if (!sel) res.selection_discarded_value += demands[v];
  }
  return res;
}

}  // namespace confluent
