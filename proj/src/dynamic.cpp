#include "confluent/dynamic.hpp"

#include "confluent/rounding.hpp"
#include "confluent/staticflow.hpp"
#include "internal.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace confluent {

Rat SimTrace::delivered_by(std::int64_t T) const {
  if (T < 0 || delivered_cum.empty()) return 0;
  if (T >= static_cast<std::int64_t>(delivered_cum.size())) return delivered_cum.back();
  return delivered_cum[T];
}

namespace {

struct Packet {
  Rat amount;
  std::int64_t arrived = 0;
  NodeId source = kNone;
  int stream = 0;
  std::size_t pos = 0;  // index of the next arc on the stream's path
};

bool before(const Packet& a, const Packet& b) {
  if (a.arrived != b.arrived) return a.arrived < b.arrived;
  if (a.source != b.source) return a.source < b.source;
  return a.stream < b.stream;
}

}  // namespace

SimTrace simulate(const Network& net, const DynamicRouting& routing, const SimOptions& opt) {
  const auto& streams = routing.streams;
  std::int64_t release_end = 0;
  for (std::size_t s = 0; s < streams.size(); ++s) {
    const auto bad = check_path(net, streams[s].path);
    if (!bad.empty()) {
      throw PathError("stream " + std::to_string(s) + ": " + bad.front().element + ": " +
                      bad.front().message);
    }
    if (streams[s].path.start != streams[s].source) {
      throw PathError("stream " + std::to_string(s) + " does not start at its source");
    }
    for (const Release& r : streams[s].schedule) {
      if (r.start < 0 || r.duration < 0 || r.rate.sign() < 0) {
        throw PathError("stream " + std::to_string(s) + " has a negative release");
      }
      if (r.rate.sign() > 0 && r.duration > 0) release_end = std::max(release_end, r.start + r.duration);
    }
  }

  SimTrace tr;
  tr.delivered_by_source.assign(net.n(), Rat(0));
  std::vector<std::deque<Packet>> queue(net.num_arcs());
  std::vector<Rat> queued(net.num_arcs(), Rat(0));
  std::map<std::int64_t, std::vector<Packet>> calendar;
  Rat in_transit = 0;
  Rat queued_total = 0;
  Rat delivered_now = 0;
  std::vector<bool> busy(net.num_arcs(), false);
  std::vector<ArcId> active;

  auto place = [&](Packet p, std::int64_t t) {
    const Path& path = streams[p.stream].path;
    if (p.pos == path.arcs.size()) {
      tr.delivered += p.amount;
      tr.delivered_by_source[p.source] += p.amount;
      delivered_now += p.amount;
      return;
    }
    const ArcId a = path.arcs[p.pos];
    p.arrived = t;
    auto& q = queue[a];
    auto it = q.end();
    while (it != q.begin() && before(p, *(it - 1))) --it;
    queued[a] += p.amount;
    queued_total += p.amount;
    q.insert(it, std::move(p));
    if (!busy[a]) {
      busy[a] = true;
      active.push_back(a);
    }
  };

  std::vector<Rat> rem(net.m());
  std::vector<Rat> load(net.num_arcs(), Rat(0));
  for (std::int64_t t = 0;; ++t) {
    if (t > opt.horizon_cap) {
      throw GuardExceeded("simulation exceeded the horizon cap of " + std::to_string(opt.horizon_cap));
    }
    delivered_now = 0;
    if (auto it = calendar.find(t); it != calendar.end()) {
      for (Packet& p : it->second) {
        in_transit -= p.amount;
        place(std::move(p), t);
      }
      calendar.erase(it);
    }
    for (std::size_t s = 0; s < streams.size(); ++s) {
      Rat amount = 0;
      for (const Release& r : streams[s].schedule) {
        if (r.start <= t && t < r.start + r.duration) amount += r.rate;
      }
      if (amount.sign() <= 0) continue;
      tr.injected += amount;
      place(Packet{amount, t, streams[s].source, static_cast<int>(s), 0}, t);
    }
    for (EdgeId e = 0; e < net.m(); ++e) rem[e] = net.edge(e).cap;
    std::vector<ArcId> touched;
    bool changed = true;
    while (changed) {
      changed = false;
      std::sort(active.begin(), active.end());
      const std::vector<ArcId> round = active;
      for (ArcId a : round) {
        const EdgeId e = net.arc_edge(a);
        auto& q = queue[a];
        while (!q.empty() && rem[e].sign() > 0) {
          Packet& front = q.front();
          const Rat amt = min(front.amount, rem[e]);
          rem[e] -= amt;
          if (load[a].is_zero()) touched.push_back(a);
          load[a] += amt;
          queued[a] -= amt;
          queued_total -= amt;
          Packet moved{amt, t, front.source, front.stream, front.pos + 1};
          if (amt == front.amount) {
            q.pop_front();
          } else {
            front.amount -= amt;
          }
          const std::int64_t len = net.arc_len(a);
          if (len == 0) {
            place(std::move(moved), t);
            changed = true;
          } else {
            in_transit += moved.amount;
            calendar[t + len].push_back(std::move(moved));
          }
        }
      }
      active.erase(std::remove_if(active.begin(), active.end(),
                                  [&](ArcId a) {
                                    if (!queue[a].empty()) return false;
                                    busy[a] = false;
                                    return true;
                                  }),
                   active.end());
    }
    for (ArcId a : touched) {
      tr.max_entry_congestion = max(tr.max_entry_congestion, (load[a] + (net.directed() ? Rat(0) : load[a ^ 1])) / net.arc_cap(a));
    }
    if (opt.record_rows) {
      std::vector<ArcId> rows = touched;
      for (ArcId a : active) {
        if (std::find(rows.begin(), rows.end(), a) == rows.end()) rows.push_back(a);
      }
      std::sort(rows.begin(), rows.end());
      for (ArcId a : rows) tr.rows.push_back({t, a, load[a], queued[a]});
    }
    for (ArcId a : touched) load[a] = 0;
    tr.delivered_cum.push_back(tr.delivered);
    if (delivered_now.sign() > 0) tr.makespan = t;
    if (tr.injected != in_transit + queued_total + tr.delivered) {
      throw Error("simulation lost or created flow at step " + std::to_string(t));
    }
    if (t + 1 >= release_end && calendar.empty() && active.empty()) {
      tr.horizon = t;
      break;
    }
  }
  tr.complete = tr.delivered == tr.injected;
  return tr;
}

std::string trace_csv(const Network& net, const SimTrace& trace) {
  std::ostringstream os;
  os << "t,edge,load,queue,delivered_cum\n";
  for (const TraceRow& r : trace.rows) {
    os << r.t << ',' << net.name(net.tail(r.arc)) << "->" << net.name(net.head(r.arc)) << ','
       << r.load.str() << ',' << r.queue.str() << ',' << trace.delivered_by(r.t).str() << '\n';
  }
  return os.str();
}

std::int64_t trans1_divisor(const Network& net, const std::vector<Path>& paths, std::int64_t T) {
  for (const Path& p : paths) {
    if (p.arcs.empty() || net.arc_len(p.arcs.back()) == 0) return T + 1;
  }
  return T;
}

PathFlow trans1(const Network& net, const DynamicRouting& routing, std::int64_t T) {
  if (T < 0) throw PreconditionViolated("negative horizon");
  SimTrace tr;
  try {
    tr = simulate(net, routing, SimOptions{T + 1, false});
  } catch (const GuardExceeded&) {
    throw Infeasible("dynamic flow does not finish within " + std::to_string(T));
  }
  if (!tr.complete || tr.makespan > T) {
    throw Infeasible("dynamic flow does not finish within " + std::to_string(T));
  }
  std::vector<Path> paths;
  for (const Stream& s : routing.streams) paths.push_back(s.path);
  const std::int64_t D = trans1_divisor(net, paths, T);
  PathFlow f;
  for (const Stream& s : routing.streams) {
    const Rat total = s.total();
    if (total.sign() <= 0) continue;
    auto it = std::find_if(f.paths.begin(), f.paths.end(),
                           [&](const FlowPath& fp) { return fp.path == s.path; });
    if (it != f.paths.end()) {
      it->value += total / Rat(D);
    } else {
      f.paths.push_back({s.path, total / Rat(D)});
    }
  }
  return f;
}

DynamicRouting trans2(const Network& net, const PathFlow& f, std::int64_t z, std::int64_t T) {
  DynamicRouting dr;
  for (const FlowPath& fp : f.paths) {
    if (fp.path.length(net) > T) {
      throw PreconditionViolated("flow path longer than the horizon " + std::to_string(T));
    }
  }
  if (z <= 0) return dr;
  for (const FlowPath& fp : f.paths) {
    if (fp.value.sign() <= 0) continue;
    dr.streams.push_back({fp.path.start, fp.path, {Release{0, fp.value, z}}});
  }
  return dr;
}

namespace {

bool zero_arc_into_sink(const Network& net) {
  for (ArcId a = 0; a < net.num_arcs(); ++a) {
    if (net.arc_exists(a) && net.arc_len(a) == 0 && net.is_sink(net.head(a)) &&
        !net.is_sink(net.tail(a))) {
      return true;
    }
  }
  return false;
}

// Completes `tree` so every source reaches the sink; returns how many
// sources needed new arcs.
int attach_sources(const Network& net, ConfluentRouting& tree, NodeId t) {
  const ConfluentRouting spt = detail::shortest_path_tree(net, t);
  int attached = 0;
  for (NodeId v : net.sources()) {
    if (reaches_sink(net, tree, v)) continue;
    ++attached;
    NodeId u = v;
    while (!net.is_sink(u) && tree.out_arc[u] == kNone) {
      tree.out_arc[u] = spt.out_arc[u];
      u = net.head(spt.out_arc[u]);
    }
  }
  return attached;
}

DynamicRouting rated_schedule(const Network& net, const ConfluentRouting& tree,
                              const std::vector<Rat>& rate, const std::vector<Rat>& amount) {
  DynamicRouting dr;
  dr.tree = tree;
  for (NodeId v = 0; v < net.n(); ++v) {
    if (rate[v].sign() <= 0 || amount[v].sign() <= 0) continue;
    Stream s{v, tree_path(net, tree, v), {}};
    const Int k = (amount[v] / rate[v]).floor();
    const std::int64_t steps = to_int64(k);
    if (steps > 0) s.schedule.push_back(Release{0, rate[v], steps});
    const Rat rest = amount[v] - rate[v] * Rat(k);
    if (rest.sign() > 0) s.schedule.push_back(Release{steps, rest, 1});
    dr.streams.push_back(std::move(s));
  }
  return dr;
}

}  // namespace

QuickestResult solve_quickest(const Network& net, const SolveOptions& opt) {
  QuickestResult res;
  const NodeId t = net.sink();
  const std::vector<NodeId> sources = net.sources();
  res.routing.tree = empty_routing(net);
  if (sources.empty()) {
    res.schedule = "greedy";
    res.time_factor = 1;
    return res;
  }
  const auto dist = detail::distances_to(net, t);
  std::int64_t T_low = 0;
  for (NodeId v : sources) {
    if (dist[v] == detail::kUnreachable) throw Infeasible("source " + net.name(v) + " cannot reach the sink");
    T_low = std::max(T_low, dist[v]);
  }
  const std::int64_t plus = zero_arc_into_sink(net) ? 1 : 0;
  const Rat total = net.total_supply();
  auto probe = [&](std::int64_t T) {
    std::vector<Rat> dem(net.n(), Rat(0));
    for (NodeId v : sources) dem[v] = net.supply(v) / Rat(T + plus);
    const bool ok = length_bounded_flow(net, dem, t, T).has_value();
    res.probes.push_back({T, ok});
    return ok;
  };
  std::int64_t hi = to_int64((total / net.c_min()).ceil()) + net.total_length();
  hi = std::max(hi, T_low);
  while (!probe(hi)) hi *= 2;
  std::int64_t lo = T_low;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (probe(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const std::int64_t Tstar = lo;
  res.lower_bound = Tstar;

  std::vector<Rat> dem(net.n(), Rat(0));
  for (NodeId v : sources) dem[v] = net.supply(v) / Rat(Tstar + plus);
  PipelineOptions po;
  po.budget = Tstar;
  po.trials = opt.trials;
  po.seed = opt.seed;
  po.base = opt.base;
  po.jobs = opt.jobs;
  po.select = false;
  res.pipeline = demand_max_static(net, dem, po);
  ConfluentRouting tree = res.pipeline.infeasible ? empty_routing(net) : res.pipeline.routing;
  res.attached = attach_sources(net, tree, t);

  const PathFlow full = routing_flow(net, tree, net.supplies());
  const FlowStats st = flow_stats(net, full);
  res.ec = st.ec;
  res.length = st.length;
  res.z = std::max<std::int64_t>(1, to_int64(st.ec.ceil()));
  PathFlow rated;
  for (const FlowPath& fp : full.paths) rated.paths.push_back({fp.path, fp.value / Rat(res.z)});
  DynamicRouting a = trans2(net, rated, res.z, st.length);
  a.tree = tree;
  const DynamicRouting b = greedy_schedule(net, tree, net.supplies());
  const SimTrace sa = simulate(net, a, SimOptions{10'000'000, false});
  const SimTrace sb = simulate(net, b, SimOptions{10'000'000, false});
  const bool use_a = sa.makespan <= sb.makespan;
  const SimTrace& s = use_a ? sa : sb;
  res.routing = use_a ? std::move(a) : b;
  res.schedule = use_a ? "trans2" : "greedy";
  res.claimed_time = s.makespan;
  res.delivered_fraction = s.delivered / total;
  res.time_factor = Tstar > 0 ? Rat(res.claimed_time) / Rat(Tstar)
                              : (res.claimed_time == 0 ? Rat(1) : Rat(res.claimed_time));
  return res;
}

std::vector<std::int64_t> mfot_candidates(std::int64_t T_min, std::int64_t T) {
  std::vector<std::int64_t> out;
  for (std::int64_t c = std::max<std::int64_t>(T_min, 1); c <= T; ++c) {
    const bool pow2c = (c & (c - 1)) == 0;
    if (c <= T_min + 32 || pow2c) {
      out.push_back(c);
    } else {
      // Jump to the next power of two.
      std::int64_t p = 1;
      while (p <= c) p <<= 1;
      c = p - 1;
    }
  }
  return out;
}

MaxFlowOverTimeResult solve_maxflow_over_time(const Network& net, std::int64_t T,
                                              const SolveOptions& opt, MfotMemo* memo) {
  MaxFlowOverTimeResult res;
  res.T = T;
  res.horizon_factor = 0;
  res.routing.tree = empty_routing(net);
  const NodeId t = net.sink();
  const std::vector<NodeId> sources = net.sources();
  const auto dist = detail::distances_to(net, t);
  std::int64_t T_min = detail::kUnreachable;
  for (NodeId v : sources) T_min = std::min(T_min, dist[v]);
  if (sources.empty() || T_min == detail::kUnreachable || T < 1) return res;

  MfotMemo local;
  MfotMemo& m = memo ? *memo : local;
  auto candidate = [&](std::int64_t c) -> const MfotCandidate& {
    if (auto it = m.by_candidate.find(c); it != m.by_candidate.end()) return it->second;
    MfotCandidate mc;
    mc.rate.assign(net.n(), Rat(0));
    mc.tree = empty_routing(net);
    const std::int64_t budget = to_int64((opt.budget_multiplier * Rat(c)).floor());
    std::vector<Rat> caps(net.n(), Rat(0));
    for (NodeId v : sources) caps[v] = net.supply(v) / Rat(c);
    const PathFlow f = length_bounded_max_flow(net, caps, t, budget);
    mc.static_value = f.value();
    if (mc.static_value.sign() > 0) {
      const FlowStats st = flow_stats(net, f);
      PipelineOptions po;
      po.budget = budget;
      po.trials = opt.trials;
      po.seed = trial_seed(opt.seed, 0x30000u + static_cast<std::uint64_t>(c));
      po.base = opt.base;
      po.jobs = opt.jobs;
      po.select = true;
      const StaticResult sr = demand_max_static(net, st.delivered, po);
      if (!sr.infeasible) {
        mc.tree = sr.routing;
        for (NodeId v : sr.delivered) mc.rate[v] = st.delivered[v];
      }
    }
    return m.by_candidate.emplace(c, std::move(mc)).first->second;
  };

  Rat best = 0;
  std::int64_t best_c = 0;
  for (std::int64_t c : mfot_candidates(T_min, T)) {
    const MfotCandidate& mc = candidate(c);
    Rat value = 0;
    for (NodeId v : sources) value += min(Rat(T) * mc.rate[v], net.supply(v));
    if (value > best) {
      best = value;
      best_c = c;
    }
  }
  if (best_c == 0) return res;
  const MfotCandidate& mc = candidate(best_c);
  std::vector<Rat> amount(net.n(), Rat(0));
  for (NodeId v : sources) amount[v] = min(Rat(T) * mc.rate[v], net.supply(v));
  res.routing = rated_schedule(net, mc.tree, mc.rate, amount);
  const SimTrace s = simulate(net, res.routing, SimOptions{10'000'000, false});
  res.delivered = s.delivered;
  res.makespan = s.makespan;
  res.candidate = best_c;
  res.static_value = mc.static_value;
  res.horizon_factor = Rat(res.makespan) / Rat(T);
  return res;
}

}  // namespace confluent
