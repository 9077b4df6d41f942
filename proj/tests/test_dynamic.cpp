#include "confluent/dynamic.hpp"
#include "confluent/oracle.hpp"
#include "confluent/staticflow.hpp"
#include "corpora.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace confluent;
using namespace confluent::testing;

namespace {

DynamicRouting one_stream(const Network& net, const std::vector<std::string>& nodes, const std::string& rate,
                          std::int64_t duration, std::int64_t start = 0) {
  DynamicRouting dr;
  const Path p = path_of(net, nodes);
  dr.streams.push_back({p.start, p, {Release{start, R(rate), duration}}});
  return dr;
}

std::int64_t formula(std::int64_t d, std::int64_t c, std::int64_t len) { return (d + c - 1) / c - 1 + len; }

SolveOptions opts(std::uint64_t seed = 1) {
  SolveOptions o;
  o.trials = 3;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("single-edge makespans follow the transit formula") {
  const Network a = single_edge("5", "2", 3);
  CHECK(simulate(a, DynamicRouting{}).makespan == 0);
  CHECK_THROWS_AS(greedy_schedule(a, empty_routing(a), {}), PreconditionViolated);
  ConfluentRouting r = empty_routing(a);
  r.out_arc[a.id("s")] = 0;
  const SimTrace tr = simulate(a, greedy_schedule(a, r, a.supplies()));
  CHECK(tr.makespan == 5);
  CHECK(tr.complete);
  CHECK(tr.delivered == 5);
  const Network b = single_edge("1", "1", 7);
  ConfluentRouting rb = empty_routing(b);
  rb.out_arc[b.id("s")] = 0;
  CHECK(simulate(b, greedy_schedule(b, rb, b.supplies())).makespan == 7);

  int checked = 0;
  for (std::int64_t d = 1; d <= 20; ++d) {
    for (std::int64_t c = 1; c <= 5; ++c) {
      for (std::int64_t len = 0; len <= 5; ++len) {
        const Network net = single_edge(std::to_string(d), std::to_string(c), len);
        ConfluentRouting rr = empty_routing(net);
        rr.out_arc[net.id("s")] = 0;
        const SimTrace t = simulate(net, greedy_schedule(net, rr, net.supplies()));
        CHECK(t.makespan == formula(d, c, len));
        CHECK(t.delivered == d);
        CHECK(t.max_entry_congestion <= 1);
        ++checked;
      }
    }
  }
  CHECK(checked == 600);
}

TEST_CASE("merging queues, shared undirected capacity and the horizon cap") {
  // h holds 2 units at time 0, a's unit arrives at step 1; h -> t admits 1 per step.
  const Network m = make_net({"a", "h", "t"}, {{"a", "h", "5", 1}, {"h", "t", "1", 1}}, {{"a", "1"}, {"h", "2"}});
  ConfluentRouting r = empty_routing(m);
  r.out_arc[m.id("a")] = arc(m, "a", "h");
  r.out_arc[m.id("h")] = arc(m, "h", "t");
  const SimTrace tm = simulate(m, greedy_schedule(m, r, m.supplies()));
  CHECK(tm.makespan == 3);
  CHECK(tm.delivered_cum[1] == 1);
  CHECK(tm.delivered_cum[2] == 2);
  CHECK(tm.delivered_cum[3] == 3);

  // Both directions of the undirected a-b edge share its capacity.
  const Network u = make_net({"a", "b", "t"}, {{"a", "b", "1", 1}, {"a", "t", "9", 1}, {"b", "t", "9", 1}},
                             {{"a", "1"}, {"b", "1"}}, "t", false);
  DynamicRouting dr = one_stream(u, {"a", "b", "t"}, "1", 1);
  dr.streams.push_back(one_stream(u, {"b", "a", "t"}, "1", 1).streams.front());
  const SimTrace tu = simulate(u, dr);
  CHECK(tu.makespan == 3);
  CHECK(tu.max_entry_congestion == 1);

  const Network slow = single_edge("1000", "1", 1);
  CHECK_THROWS_AS(simulate(slow, one_stream(slow, {"s", "t"}, "1000", 1), SimOptions{50, false}), GuardExceeded);
}

TEST_CASE("simulation conserves supply and respects entry capacities") {
  int runs = 0;
  for (const Network& net : corpora::pipeline_corpus(30, 8)) {
    // Every flow path released at once, so queues build up.
    const PathFlow f = max_flow(net, net.supplies(), net.sink());
    if (f.value().sign() == 0) continue;
    DynamicRouting dr;
    for (const FlowPath& fp : f.paths) dr.streams.push_back({fp.path.start, fp.path, {Release{0, fp.value, 1}}});
    const SimTrace tr = simulate(net, dr);
    CHECK(tr.complete);
    CHECK(tr.injected == f.value());
    CHECK(tr.delivered == tr.injected);
    CHECK(tr.delivered_cum.back() == tr.delivered);
    CHECK(tr.max_entry_congestion <= 1);
    for (std::size_t t = 1; t < tr.delivered_cum.size(); ++t) CHECK(tr.delivered_cum[t - 1] <= tr.delivered_cum[t]);
    const FlowStats st = flow_stats(net, f);
    for (NodeId v : net.sources()) CHECK(tr.delivered_by_source[v] == st.delivered[v]);
    ++runs;
  }
  CHECK(runs > 20);
}

TEST_CASE("trace CSV header and rows") {
  const Network a = single_edge("3", "2", 1);
  const SimTrace tr = simulate(a, one_stream(a, {"s", "t"}, "3", 1));
  const std::string csv = trace_csv(a, tr);
  CHECK(csv.rfind("t,edge,load,queue,delivered_cum\n", 0) == 0);
  CHECK(csv.find("0,s->t,2,1,0\n") != std::string::npos);
  CHECK(csv.find("1,s->t,1,0,2\n") != std::string::npos);
}

TEST_CASE("trans1: constant rate, two paths, same support") {
  const Network e = single_edge("4", "1", 1);
  const PathFlow f = trans1(e, one_stream(e, {"s", "t"}, "1", 4), 4);
  REQUIRE(f.paths.size() == 1);
  CHECK(f.value() == 1);
  CHECK_THROWS_AS(trans1(e, one_stream(e, {"s", "t"}, "1", 4), 3), Infeasible);

  const Network dia = diamond("1", "1", 1, 2, "5");
  DynamicRouting dr = one_stream(dia, {"s", "a", "t"}, "1", 3);
  dr.streams.push_back(one_stream(dia, {"s", "b", "t"}, "1", 2).streams.front());
  const PathFlow g = trans1(dia, dr, 6);
  CHECK(g.value() == R("5/6"));
  const FlowStats st = flow_stats(dia, g);
  CHECK(st.ec <= 1);
  CHECK(st.length <= 6);
  CHECK(g.paths[0].value == R("3/6"));
  CHECK(g.paths[1].value == R("2/6"));
  // Support of the static flow equals the edges the streams use.
  for (EdgeId x = 0; x < dia.m(); ++x) CHECK(st.edge_flow[x].sign() > 0);

  const Network zero = single_edge("2", "1", 0);
  CHECK(trans1_divisor(zero, {path_of(zero, {"s", "t"})}, 5) == 6);
  CHECK(trans1_divisor(e, {path_of(e, {"s", "t"})}, 5) == 5);
}

TEST_CASE("trans1 output is feasible and length-bounded on the corpus") {
  for (const Network& net : corpora::pipeline_corpus(30, 61)) {
    const PathFlow f = max_flow(net, net.supplies(), net.sink());
    if (f.value() != net.total_supply()) continue;
    DynamicRouting dr;
    for (const FlowPath& fp : f.paths) dr.streams.push_back({fp.path.start, fp.path, {Release{0, fp.value, 1}}});
    const std::int64_t T = simulate(net, dr).makespan;
    const PathFlow g = trans1(net, dr, T);
    const FlowStats st = flow_stats(net, g);
    CHECK(st.ec <= 1);
    CHECK(st.length <= T);
    CHECK(g.value() * trans1_divisor(net, [&] {
            std::vector<Path> ps;
            for (const Stream& s : dr.streams) ps.push_back(s.path);
            return ps;
          }(), T) == net.total_supply());
  }
}

TEST_CASE("trans2: fixed cases and round trip") {
  const Network p = make_net({"s", "a", "b", "t"}, {{"s", "a", "1", 1}, {"a", "b", "1", 1}, {"b", "t", "1", 1}},
                             {{"s", "5"}});
  PathFlow f;
  f.paths.push_back({path_of(p, {"s", "a", "b", "t"}), 1});
  const SimTrace t5 = simulate(p, trans2(p, f, 5, 3));
  CHECK(t5.delivered_by(8) == 5);
  CHECK(t5.makespan <= 8);
  CHECK(trans2(p, f, 0, 3).streams.empty());
  CHECK(simulate(p, trans2(p, f, 0, 3)).delivered == 0);
  CHECK_THROWS_AS(trans2(p, f, 5, 2), PreconditionViolated);

  // dynamic -> trans1 -> trans2 with z = T delivers the original supply by 2T.
  const Network dia = diamond("1", "1", 1, 2, "5");
  DynamicRouting dr = one_stream(dia, {"s", "a", "t"}, "1", 3);
  dr.streams.push_back(one_stream(dia, {"s", "b", "t"}, "1", 2).streams.front());
  const std::int64_t T = 6;
  const SimTrace back = simulate(dia, trans2(dia, trans1(dia, dr, T), T, T));
  CHECK(back.delivered_by(2 * T) == 5);
}

TEST_CASE("trans2 delivers z times the static value by T + z") {
  std::mt19937_64 rng(3);
  int runs = 0;
  for (const Network& net : corpora::pipeline_corpus(40, 71)) {
    const std::int64_t T = 2 + static_cast<std::int64_t>(rng() % 6);
    const PathFlow f = length_bounded_max_flow(net, net.supplies(), net.sink(), T);
    if (f.value().sign() == 0) continue;
    const std::int64_t z = 1 + static_cast<std::int64_t>(rng() % 5);
    const SimTrace tr = simulate(net, trans2(net, f, z, T));
    CHECK(tr.delivered_by(T + z) == f.value() * z);
    CHECK(tr.max_entry_congestion <= 1);
    const FlowStats st = flow_stats(net, f);
    for (NodeId v : net.sources()) CHECK(tr.delivered_by_source[v] == st.delivered[v] * z);
    ++runs;
  }
  CHECK(runs > 20);
}

TEST_CASE("solve_quickest: single edge, empty supplies, unreachable sink") {
  const Network a = single_edge("5", "2", 3);
  const QuickestResult q = solve_quickest(a, opts());
  CHECK(q.claimed_time == 5);
  CHECK(q.delivered_fraction == 1);
  // The static probe already succeeds at T = 3 (5/3 per step fits c = 2).
  CHECK(q.lower_bound == 3);
  const SimTrace tr = simulate(a, q.routing);
  CHECK(tr.makespan == 5);
  CHECK(tr.delivered == 5);

  const Network none = make_net({"s", "t"}, {{"s", "t", "1", 1}}, {});
  CHECK(solve_quickest(none, opts()).claimed_time == 0);

  const Network cut = make_net({"s", "a", "t"}, {{"s", "a", "1", 1}}, {{"s", "1"}});
  CHECK_THROWS_AS(solve_quickest(cut, opts()), Infeasible);
}

TEST_CASE("solve_quickest against the tree oracle on small instances") {
  int compared = 0;
  for (const Network& net : corpora::pipeline_corpus(14, 5150, 6, 3)) {
    if (max_flow_value(net, net.supplies(), net.sink()) == 0) continue;
    OracleResult o;
    try {
      o = oracle_quickest(net);
    } catch (const Infeasible&) {
      CHECK_THROWS_AS(solve_quickest(net, opts()), Infeasible);
      continue;
    }
    const QuickestResult q = solve_quickest(net, opts(compared));
    const SimTrace tr = simulate(net, q.routing);
    CHECK(tr.makespan == q.claimed_time);
    CHECK(tr.delivered == q.delivered_fraction * net.total_supply());
    CHECK(q.delivered_fraction == 1);
    CHECK(q.claimed_time >= o.best_time);
    CHECK(q.lower_bound <= o.best_time);
    std::int64_t worst_infeasible = -1;
    for (const Probe& p : q.probes) {
      if (!p.feasible) worst_infeasible = std::max(worst_infeasible, p.T);
    }
    CHECK(worst_infeasible < q.lower_bound);
    CHECK(q.lower_bound <= q.claimed_time);
    ++compared;
  }
  CHECK(compared >= 8);
}

TEST_CASE("solve_maxflow_over_time: short horizon, single edge, monotone sweep") {
  const Network p = make_net({"s", "a", "t"}, {{"s", "a", "1", 2}, {"a", "t", "1", 2}}, {{"s", "5"}});
  CHECK(solve_maxflow_over_time(p, 3, opts()).delivered == 0);

  const Network e = single_edge("100", "1", 1);
  const MaxFlowOverTimeResult r = solve_maxflow_over_time(e, 10, opts());
  CHECK(r.delivered >= 9);
  const SimTrace tr = simulate(e, r.routing);
  CHECK(tr.delivered == r.delivered);
  CHECK(tr.makespan == r.makespan);

  for (const Network& net : corpora::pipeline_corpus(8, 33)) {
    MfotMemo memo;
    Rat prev = 0;
    for (std::int64_t T = 1; T <= 12; ++T) {
      const MaxFlowOverTimeResult m = solve_maxflow_over_time(net, T, opts(), &memo);
      CHECK(m.delivered >= prev);
      CHECK(m.delivered <= net.total_supply());
      prev = m.delivered;
    }
  }
}

TEST_CASE("max flow over time candidate horizons grow with T") {
  const auto a = mfot_candidates(2, 10);
  const auto b = mfot_candidates(2, 100);
  for (std::int64_t c : a) CHECK(std::find(b.begin(), b.end(), c) != b.end());
  CHECK(std::find(a.begin(), a.end(), 10) != a.end());
}
