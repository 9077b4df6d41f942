#include "confluent/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace confluent {

FlowDag induce_dag(const Network& net, const PathFlow& f) {
  FlowDag dag;
  dag.flow.assign(net.num_arcs(), Rat(0));
  dag.p.assign(net.num_arcs(), Rat(0));
  dag.out.assign(net.n(), {});
  dag.in.assign(net.n(), {});
  for (const FlowPath& fp : f.paths) {
    for (ArcId a : fp.path.arcs) dag.flow[a] += fp.value;
  }
  std::vector<Rat> fout(net.n(), Rat(0));
  std::vector<int> indeg(net.n(), 0);
  for (ArcId a = 0; a < net.num_arcs(); ++a) {
    if (dag.flow[a].sign() <= 0) continue;
    dag.out[net.tail(a)].push_back(a);
    dag.in[net.head(a)].push_back(a);
    fout[net.tail(a)] += dag.flow[a];
    ++indeg[net.head(a)];
  }
  for (ArcId a = 0; a < net.num_arcs(); ++a) {
    if (dag.flow[a].sign() > 0) dag.p[a] = dag.flow[a] / fout[net.tail(a)];
  }
  std::vector<NodeId> ready;
  for (NodeId v = net.n() - 1; v >= 0; --v) {
    if (indeg[v] == 0) ready.push_back(v);
  }
  while (!ready.empty()) {
    const NodeId v = ready.back();
    ready.pop_back();
    dag.topo.push_back(v);
    for (ArcId a : dag.out[v]) {
      if (--indeg[net.head(a)] == 0) ready.push_back(net.head(a));
    }
  }
  if (static_cast<int>(dag.topo.size()) != net.n()) {
    throw PreconditionViolated("flow support contains a cycle");
  }
  return dag;
}

std::vector<bool> source_mask(const Network& net) {
  std::vector<bool> m(net.n(), false);
  for (NodeId v : net.sources()) m[v] = true;
  return m;
}

std::vector<Rat> expected_congestion(const Network& net, const FlowDag& dag,
                                     const std::vector<bool>& is_source) {
  std::vector<Rat> c(net.n(), Rat(0));
  for (NodeId v : dag.topo) {
    Rat s = is_source[v] ? Rat(1) : Rat(0);
    for (ArcId a : dag.in[v]) s += dag.p[a] * c[net.tail(a)];
    c[v] = std::move(s);
  }
  return c;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master) ^ (trial * 0xd1b54a32d192ed03ULL + 1));
}

ConfluentRouting round_once(const Network& net, const FlowDag& dag, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Int two64 = Int(1) << 64;
  ConfluentRouting r = empty_routing(net);
  for (NodeId v = 0; v < net.n(); ++v) {
    const auto& outs = dag.out[v];
    if (outs.empty() || net.is_sink(v)) continue;
    if (outs.size() == 1) {
      r.out_arc[v] = outs.front();
      continue;
    }
    const Int u = rng();
    Rat cum = 0;
    ArcId pick = outs.back();
    for (ArcId a : outs) {
      cum += dag.p[a];
      if (u * cum.den() < cum.num() * two64) {
        pick = a;
        break;
      }
    }
    r.out_arc[v] = pick;
  }
  return r;
}

namespace {

RoundingDiagnostics counts(const Network& net, const ConfluentRouting& r) {
  RoundingDiagnostics d;
  const std::vector<bool> src = source_mask(net);
  d.congestion.assign(net.n(), 0);
  std::vector<int> h(net.n(), -1), he(net.n(), -1);
  for (NodeId s = 0; s < net.n(); ++s) {
    if (!src[s]) continue;
    NodeId at = s;
    int hops = 0, eff = 0;
    int guard = 0;
    while (true) {
      ++d.congestion[at];
      if (net.is_sink(at) || r.out_arc[at] == kNone) break;
      at = net.head(r.out_arc[at]);
      ++hops;
      if (src[at]) ++eff;
      if (++guard > net.n()) throw PathError("routing contains a cycle");
    }
    if (!net.is_sink(at)) continue;
    h[at] = std::max(h[at], hops);
    he[at] = std::max(he[at], eff);
  }
  for (NodeId v = 0; v < net.n(); ++v) d.max_congestion = std::max(d.max_congestion, d.congestion[v]);
  for (NodeId t : net.sinks()) {
    d.tree_heights.push_back({t, std::max(h[t], 0)});
    d.effective_heights.push_back({t, std::max(he[t], 0)});
    d.height = std::max(d.height, h[t]);
    d.effective_height = std::max(d.effective_height, he[t]);
  }
  return d;
}

}  // namespace

RoundingDiagnostics diagnostics(const Network& net, const FlowDag& dag, const ConfluentRouting& r) {
  RoundingDiagnostics d = counts(net, r);
  const std::vector<bool> src = source_mask(net);
  d.expected_congestion = expected_congestion(net, dag, src);
  for (const Rat& c : d.expected_congestion) d.expected_max = max(d.expected_max, c);
  return d;
}

RoundResult round_best(const Network& net, const FlowDag& dag, int trials, std::uint64_t seed,
                       int jobs) {
  if (trials < 1) throw PreconditionViolated("trials must be at least 1");
  const auto srcs = net.sources();
  for (NodeId v : srcs) {
    if (net.supply(v) != net.supply(srcs.front())) {
      throw PreconditionViolated("rounding needs uniform supplies; group them first");
    }
  }
  std::vector<RoundResult> results(trials);
  auto work = [&](int first, int step) {
    for (int t = first; t < trials; t += step) {
      results[t].routing = round_once(net, dag, trial_seed(seed, t));
      results[t].diag = counts(net, results[t].routing);
      results[t].trial = t;
    }
  };
  jobs = std::clamp(jobs, 1, trials);
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
    for (auto& th : pool) th.join();
  }
  int best = 0;
  for (int t = 1; t < trials; ++t) {
    if (results[t].diag.max_congestion < results[best].diag.max_congestion) best = t;
  }
  RoundResult out = std::move(results[best]);
  out.diag.expected_congestion = expected_congestion(net, dag, source_mask(net));
  for (const Rat& c : out.diag.expected_congestion) out.diag.expected_max = max(out.diag.expected_max, c);
  return out;
}

int default_trials(int n, double c) {
  return std::max(1, static_cast<int>(std::ceil(c * std::log(std::max(n, 2)))));
}

}  // namespace confluent
