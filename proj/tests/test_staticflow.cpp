#include "confluent/instances.hpp"
#include "confluent/staticflow.hpp"
#include "corpora.hpp"
#include "helpers.hpp"
#include "lp_oracle.hpp"

#include <doctest.h>

#include <random>

using namespace confluent;
using namespace confluent::testing;

TEST_CASE("max flow on parallel edges, the 2x2 half-grid and a cut-off sink") {
  const Network par = make_net({"s", "t"}, {{"s", "t", "1", 1}, {"s", "t", "1", 1}}, {{"s", "5"}});
  CHECK(max_flow_value(par, par.supplies(), par.sink()) == 2);

  const HalfGrid hg = gen_half_grid(2, 1, Gadget::None);
  const PathFlow f = max_flow(hg.net, hg.net.supplies(), hg.t);
  CHECK(f.value() == R("3/2"));
  CHECK(flow_stats(hg.net, f).ec <= 1);

  const Network cut = make_net({"s", "a", "t"}, {{"s", "a", "1", 1}}, {{"s", "1"}});
  CHECK(max_flow_value(cut, cut.supplies(), cut.sink()) == 0);
}

TEST_CASE("length-bounded feasibility on a path and a diamond") {
  const Network path = make_net({"s", "a", "t"}, {{"s", "a", "1", 1}, {"a", "t", "1", 1}}, {{"s", "1"}});
  auto ok = length_bounded_flow(path, path.supplies(), path.sink(), 2);
  REQUIRE(ok.has_value());
  CHECK(flow_stats(path, *ok).length == 2);
  CHECK_FALSE(length_bounded_flow(path, path.supplies(), path.sink(), 1).has_value());

  const Network dia = diamond("1/2", "1/2", 1, 2, "1");
  auto split = length_bounded_flow(dia, dia.supplies(), dia.sink(), 4);
  REQUIRE(split.has_value());
  const FlowStats st = flow_stats(dia, *split);
  CHECK(st.value == 1);
  CHECK(st.ec <= 1);
  CHECK(st.length <= 4);
  CHECK(split->paths.size() == 2);
  CHECK_FALSE(length_bounded_flow(dia, dia.supplies(), dia.sink(), 3).has_value());
}

TEST_CASE("a budget covering every edge never binds") {
  for (const Network& net : corpora::pipeline_corpus(30, 808, 7, 4)) {
    const bool plain = max_flow_value(net, net.supplies(), net.sink()) == net.total_supply();
    CHECK(length_bounded_flow(net, net.supplies(), net.sink(), net.total_length()).has_value() == plain);
  }
}

TEST_CASE("length-bounded values agree with the path LP oracle") {
  CorpusSpec spec;
  spec.count = 60;
  spec.n_min = 3;
  spec.n_max = 6;
  spec.kappa_max = 3;
  spec.cap_max = 3;
  spec.len_min = 0;
  spec.len_max = 3;
  spec.supply_max = 3;
  int checked = 0;
  for (const Network& net : gen_random_corpus(spec, 31337)) {
    for (std::int64_t budget : {0, 2, 3, 5, 8}) {
      const Rat lp = path_lp_value(net, net.supplies(), budget);
      const PathFlow f = length_bounded_max_flow(net, net.supplies(), net.sink(), budget);
      CHECK(f.value() == lp);
      const FlowStats st = flow_stats(net, f);
      CHECK(st.ec <= 1);
      CHECK(st.length <= budget);
      for (NodeId v = 0; v < net.n(); ++v) CHECK(st.delivered[v] <= net.supply(v));
      CHECK(length_bounded_flow(net, net.supplies(), net.sink(), budget).has_value() ==
            (lp == net.total_supply()));
      ++checked;
    }
  }
  CHECK(checked == 300);
}

TEST_CASE("undirected length-bounded values agree with the path LP oracle") {
  CorpusSpec spec;
  spec.count = 30;
  spec.n_min = 3;
  spec.n_max = 5;
  spec.kappa_max = 2;
  spec.directed = false;
  spec.dag = false;
  for (const Network& net : gen_random_corpus(spec, 99)) {
    for (std::int64_t budget : {1, 3, 6}) {
      CHECK(length_bounded_max_flow(net, net.supplies(), net.sink(), budget).value() ==
            path_lp_value(net, net.supplies(), budget));
    }
  }
}

TEST_CASE("decompose: single edge, dropped cycle, two-path split") {
  const Network one = single_edge("3", "5", 1);
  std::vector<Rat> flow(one.num_arcs(), Rat(0));
  flow[0] = 3;
  const PathFlow f = decompose(one, flow);
  REQUIRE(f.paths.size() == 1);
  CHECK(f.paths[0].value == 3);

  const Network cyc = make_net({"s", "a", "b", "t"}, {{"s", "t", "1", 1}, {"a", "b", "1", 1}, {"b", "a", "1", 1}},
                               {{"s", "1"}});
  std::vector<Rat> cf(cyc.num_arcs(), Rat(0));
  cf[0] = 1;
  cf[2] = 1;
  cf[4] = 1;
  const PathFlow g = decompose(cyc, cf);
  REQUIRE(g.paths.size() == 1);
  CHECK(g.paths[0].path == path_of(cyc, {"s", "t"}));

  const Network dia = diamond("1", "1", 1, 1, "1");
  std::vector<Rat> df(dia.num_arcs(), Rat(0));
  for (ArcId a : {arc(dia, "s", "a"), arc(dia, "a", "t"), arc(dia, "s", "b"), arc(dia, "b", "t")}) df[a] = R("1/2");
  CHECK(decompose(dia, df).paths.size() == 2);
}

TEST_CASE("decompose then aggregate reproduces acyclic arc flows") {
  for (const Network& net : corpora::pipeline_corpus(30, 4040, 7, 4)) {
    const PathFlow f = max_flow(net, net.supplies(), net.sink());
    const FlowStats st = flow_stats(net, f);
    const PathFlow again = decompose(net, st.arc_flow);
    const FlowStats st2 = flow_stats(net, again);
    CHECK(st2.arc_flow == st.arc_flow);
    CHECK(st2.delivered == st.delivered);
  }
}

TEST_CASE("unsplittable flow: fixed cases") {
  const Network one = single_edge("1", "2", 1);
  const PathFlow a = unsplittable_flow(one, one.supplies(), one.sink());
  REQUIRE(a.paths.size() == 1);
  CHECK(flow_stats(one, a).ec <= 1);

  const Network two = make_net({"a", "b", "t"}, {{"a", "t", "1", 1}, {"b", "t", "1", 1}}, {{"a", "1"}, {"b", "1"}});
  CHECK(flow_stats(two, unsplittable_flow(two, two.supplies(), two.sink())).ec == 1);

  const Network three = make_net({"a", "b", "c", "h", "t"},
                                 {{"a", "h", "1", 1}, {"b", "h", "1", 1}, {"c", "h", "1", 1}, {"h", "t", "1", 1},
                                  {"h", "t", "1", 1}},
                                 {{"a", "1/2"}, {"b", "1/2"}, {"c", "1/2"}});
  const PathFlow u = unsplittable_flow(three, three.supplies(), three.sink());
  CHECK(u.paths.size() == 3);
  const Rat ec = flow_stats(three, u).ec;
  CHECK(ec <= 2);
  // Exhaustive: the best of the 2^3 assignments has congestion 1.
  CHECK(ec >= 1);

  const Network nba = make_net({"s", "t"}, {{"s", "t", "1", 1}}, {{"s", "2"}});
  CHECK_THROWS_AS(unsplittable_flow(nba, nba.supplies(), nba.sink()), PreconditionViolated);
  const Network blocked = make_net({"a", "b", "t"}, {{"a", "b", "2", 1}, {"b", "t", "2", 1}},
                                   {{"a", "2"}, {"b", "2"}});
  CHECK_THROWS_AS(unsplittable_flow(blocked, blocked.supplies(), blocked.sink()), Infeasible);
}

TEST_CASE("unsplittable flow keeps congestion at most 2 on every run") {
  CorpusSpec spec;
  spec.count = 80;
  spec.n_min = 4;
  spec.n_max = 9;
  spec.kappa_max = 5;
  spec.cap_min = 2;
  spec.cap_max = 4;
  spec.supply_max = 2;
  spec.extra_edges = 1.5;
  int routed = 0;
  for (const Network& net : gen_random_corpus(spec, 2718)) {
    try {
      const PathFlow u = unsplittable_flow(net, net.supplies(), net.sink());
      CHECK(u.paths.size() == static_cast<std::size_t>(net.kappa()));
      const FlowStats st = flow_stats(net, u);
      CHECK(st.ec <= 2);
      CHECK(st.value == net.total_supply());
      ++routed;
    } catch (const Infeasible&) {
      CHECK(max_flow_value(net, net.supplies(), net.sink()) < net.total_supply());
    }
  }
  CHECK(routed > 20);
}

TEST_CASE("node splitting") {
  NetworkSpec spec;
  const NodeId s = spec.add_node("s", 3);
  const NodeId v = spec.add_node("v");
  const NodeId t = spec.add_node("t");
  spec.add_edge(s, v, 5, 1);
  spec.add_edge(v, t, 5, 1);
  spec.sinks = {t};
  spec.node_caps = std::vector<Rat>{5, 2, 5};
  const Network net(spec);
  const NodeSplit ns = node_to_edge_capacitated(net);
  CHECK(ns.net.edge(ns.split_edge[v]).cap == 2);
  CHECK(ns.net.edge(ns.split_edge[v]).len == 0);
  PathFlow f;
  Path p{ns.in[s], {2 * ns.split_edge[s]}};
  for (ArcId a : ns.net.out_arcs(ns.out[s])) p.arcs.push_back(a);
  p.arcs.push_back(2 * ns.split_edge[v]);
  for (ArcId a : ns.net.out_arcs(ns.out[v])) p.arcs.push_back(a);
  f.paths.push_back({p, 3});
  REQUIRE(check_path(ns.net, p).empty());
  const PathFlow back = map_back(net, ns, f);
  REQUIRE(check_path(net, back.paths[0].path).empty());
  CHECK(node_congestion(net, flow_stats(net, back).node_out) == R("3/2"));
  CHECK_THROWS_AS(node_to_edge_capacitated(single_edge("1", "1", 1)), PreconditionViolated);
}

TEST_CASE("node splitting keeps the node-capacitated max-flow value") {
  // Node-capacitated networks carry no edge capacities; the oracle is a path
  // LP with one row per node.
  for (const Network& net : corpora::monotone_corpus(20, 515)) {
    const NodeSplit ns = node_to_edge_capacitated(net);
    std::vector<Rat> caps(ns.net.n(), Rat(0));
    for (NodeId v : net.sources()) caps[ns.in[v]] = net.supply(v);
    const PathFlow f = max_flow(ns.net, caps, ns.in[net.sink()]);
    CHECK(f.value() == path_lp_node_value(net, net.supplies()));
    const PathFlow back = map_back(net, ns, f);
    CHECK(node_congestion(net, flow_stats(net, back).node_out) <= 1);
  }
}
