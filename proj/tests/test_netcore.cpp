#include "confluent/io.hpp"
#include "confluent/network.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace confluent;
using namespace confluent::testing;

TEST_CASE("rationals stay exact and reduced") {
  CHECK(R("6/4").str() == "3/2");
  CHECK(R("-2/4").str() == "-1/2");
  CHECK_THROWS_AS(R("2/-4"), RatError);
  CHECK(R("7").is_integer());
  CHECK(R("1/3") + R("1/6") == R("1/2"));
  CHECK(R("7/2").floor() == 3);
  CHECK(R("7/2").ceil() == 4);
  CHECK(R("-7/2").floor() == -4);
  CHECK_THROWS_AS(R("1/0"), RatError);
  CHECK_THROWS_AS(R("abc"), RatError);
  CHECK(ceil_log2(R("1")) == 0);
  CHECK(ceil_log2(R("5")) == 3);
  CHECK(ceil_log2(R("1/3")) == -1);
  CHECK(floor_log2(R("5")) == 2);
  CHECK(floor_log2(R("1/3")) == -2);
  CHECK(pow2(-2) == R("1/4"));
  CHECK(ceil_log(R("100"), 10) == 2);
  CHECK(ceil_log(R("101"), 10) == 3);
}

TEST_CASE("harmonic sums are exact") {
  Rat h = 0;
  for (int i = 1; i <= 4; ++i) h += Rat(1) / Rat(i);
  CHECK(h == R("25/12"));
}

TEST_CASE("network JSON round trip is canonical") {
  const Network net = make_net({"s", "a", "t"}, {{"s", "a", "3/2", 2}, {"a", "t", "1", 0}}, {{"s", "5/3"}});
  const std::string text = write_network(net);
  const Network back = read_network(text);
  CHECK(write_network(back) == text);
  CHECK(back.kappa() == 1);
  CHECK(back.total_supply() == R("5/3"));
  CHECK(back.edge(0).cap == R("3/2"));
  CHECK(back.c_min() == 1);
  CHECK(back.total_length() == 2);
}

TEST_CASE("parser rejects malformed documents with context") {
  CHECK_THROWS_AS(read_network("{"), ParseError);
  CHECK_THROWS_AS(read_network(R"({"nodes":["s","t"],"edges":[{"u":"s","v":"t","cap":"1","len":1.5}],"sinks":["t"]})"),
                  ParseError);
  CHECK_THROWS_AS(read_network(R"({"nodes":["s","t"],"edges":[{"u":"s","v":"x","cap":"1","len":1}],"sinks":["t"]})"),
                  SchemaError);
  CHECK_THROWS_AS(read_network(R"({"nodes":["s","t"],"edges":[{"u":"s","v":"t","cap":"1/0","len":1}],"sinks":["t"]})"),
                  ParseError);
  CHECK_THROWS_AS(read_network(R"({"nodes":["s","t"],"edges":[{"u":"s","v":"t","cap":0.5,"len":1}],"sinks":["t"]})"),
                  ParseError);
  CHECK_THROWS_AS(read_network(R"({"nodes":["s","s"],"edges":[],"sinks":["s"]})"), SchemaError);
  try {
    read_network("{\n  \"nodes\": [\n  oops");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("validate reports structural problems") {
  NetworkSpec spec;
  const NodeId s = spec.add_node("s", -1);
  const NodeId t = spec.add_node("t", 1);
  spec.add_edge(s, t, 0, -1);
  spec.add_edge(s, s, 1, 1);
  spec.sinks = {t};
  const auto bad = validate(Network(spec));
  CHECK(bad.size() == 5);
  CHECK(validate(single_edge("5", "2", 3)).empty());
}

TEST_CASE("kappa is derived from positive supplies") {
  const Network net = make_net({"a", "b", "c", "t"}, {{"a", "t", "1", 1}, {"b", "t", "1", 1}, {"c", "t", "1", 1}},
                               {{"a", "1"}, {"b", "0"}, {"c", "2"}});
  CHECK(net.kappa() == 2);
  CHECK(net.sources() == std::vector<NodeId>{net.id("a"), net.id("c")});
}

TEST_CASE("undirected edges expand to two arcs") {
  const Network net = make_net({"s", "a", "t"}, {{"s", "a", "1", 1}, {"a", "t", "1", 1}}, {{"s", "1"}}, "t", false);
  CHECK(net.arc_exists(1));
  CHECK(net.tail(1) == net.id("a"));
  CHECK(net.head(1) == net.id("s"));
  const Network dir = single_edge("1", "1", 1);
  CHECK_FALSE(dir.arc_exists(1));
}

TEST_CASE("paths and confluent routings are checked") {
  const Network net = diamond();
  const Path p = path_of(net, {"s", "a", "t"});
  CHECK(check_path(net, p).empty());
  CHECK(p.length(net) == 2);
  Path broken{net.id("s"), {arc(net, "a", "t")}};
  CHECK_FALSE(check_path(net, broken).empty());
  Path short_path{net.id("s"), {arc(net, "s", "a")}};
  CHECK_FALSE(check_path(net, short_path).empty());

  ConfluentRouting r = empty_routing(net);
  r.out_arc[net.id("s")] = arc(net, "s", "b");
  CHECK_FALSE(check_confluent(net, r, {net.id("s")}).empty());  // dead end at b
  r.out_arc[net.id("b")] = arc(net, "b", "t");
  CHECK(check_confluent(net, r, {net.id("s")}).empty());
  CHECK(tree_path(net, r, net.id("s")) == path_of(net, {"s", "b", "t"}));
  r.out_arc[net.id("a")] = arc(net, "b", "t");  // arc does not leave a
  CHECK_FALSE(check_confluent(net, r, {}).empty());
}

TEST_CASE("cycles in a routing are detected") {
  const Network net = make_net({"s", "a", "t"}, {{"s", "a", "1", 1}, {"a", "t", "1", 1}}, {{"s", "1"}}, "t", false);
  ConfluentRouting r = empty_routing(net);
  r.out_arc[net.id("s")] = 0;
  r.out_arc[net.id("a")] = 1;  // back to s
  CHECK_FALSE(check_confluent(net, r, {net.id("s")}).empty());
  CHECK_THROWS_AS(tree_path(net, r, net.id("s")), PathError);
  CHECK_FALSE(reaches_sink(net, r, net.id("s")));
}

TEST_CASE("flow statistics: congestion, length and delivery") {
  const Network net = diamond("1", "2", 1, 3, "3");
  PathFlow f;
  f.paths.push_back({path_of(net, {"s", "a", "t"}), R("1/2")});
  f.paths.push_back({path_of(net, {"s", "b", "t"}), R("5/2")});
  const FlowStats st = flow_stats(net, f);
  CHECK(st.ec == R("5/4"));
  CHECK(st.length == 6);
  CHECK(st.value == 3);
  CHECK(st.delivered[net.id("s")] == 3);
  CHECK(st.node_out[net.id("b")] == R("5/2"));
  CHECK(node_congestion(net, st.node_out) == 3);
}

TEST_CASE("routing_flow follows tree paths") {
  const Network net = diamond();
  ConfluentRouting r = empty_routing(net);
  r.out_arc[net.id("s")] = arc(net, "s", "a");
  r.out_arc[net.id("a")] = arc(net, "a", "t");
  const PathFlow f = routing_flow(net, r, net.supplies());
  REQUIRE(f.paths.size() == 1);
  CHECK(f.value() == 4);
  const DynamicRouting g = greedy_schedule(net, r, net.supplies());
  REQUIRE(g.streams.size() == 1);
  CHECK(g.total() == 4);
  CHECK(g.tree.has_value());
}

TEST_CASE("routing documents round trip") {
  const Network net = diamond();
  ConfluentRouting r = empty_routing(net);
  r.out_arc[net.id("s")] = arc(net, "s", "b");
  r.out_arc[net.id("b")] = arc(net, "b", "t");
  CHECK(routing_from_json(net, routing_to_json(net, r)) == r);
  DynamicRouting dr = greedy_schedule(net, r, net.supplies());
  dr.streams[0].schedule = {{2, R("1/3"), 6}};
  const DynamicRouting back = dynamic_routing_from_json(net, dynamic_routing_to_json(net, dr));
  REQUIRE(back.streams.size() == 1);
  CHECK(back.streams[0].path == dr.streams[0].path);
  CHECK(back.streams[0].total() == 2);
  CHECK(back.tree == dr.tree);
}

TEST_CASE("DIMACS projection scales capacities to integers") {
  const Network net = make_net({"s", "t"}, {{"s", "t", "1/2", 1}}, {{"s", "1/3"}});
  const std::string d = write_dimacs(net);
  CHECK(d.find("p max 3 2") != std::string::npos);
  CHECK(d.find("a 1 2 3") != std::string::npos);  // 1/2 * 6
  CHECK(d.find("a 3 1 2") != std::string::npos);  // 1/3 * 6
  CHECK(d.find("n 2 t") != std::string::npos);
}

TEST_CASE("random relabeling keeps derived quantities") {
  const Network net = diamond("1", "2", 1, 3, "3");
  std::mt19937_64 rng(5);
  std::vector<int> perm(net.n());
  for (int i = 0; i < net.n(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  NetworkSpec spec;
  std::vector<NodeId> where(net.n());
  for (int i = 0; i < net.n(); ++i) where[perm[i]] = i;
  for (int i = 0; i < net.n(); ++i) spec.add_node(net.name(perm[i]), net.supply(perm[i]));
  for (EdgeId e = 0; e < net.m(); ++e) {
    spec.add_edge(where[net.edge(e).u], where[net.edge(e).v], net.edge(e).cap, net.edge(e).len);
  }
  spec.sinks = {where[net.sink()]};
  const Network p(spec);
  CHECK(p.kappa() == net.kappa());
  CHECK(p.total_supply() == net.total_supply());
  CHECK(p.c_max() == net.c_max());
}

TEST_CASE("validate names the offending element") {
  NetworkSpec spec;
  const NodeId s = spec.add_node("s", 1);
  const NodeId t = spec.add_node("t", 1);
  spec.add_edge(s, t, 1, 1);
  spec.sinks = {t};
  const auto bad = validate(Network(spec));
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].element.find("t") != std::string::npos);

  NetworkSpec m;
  const NodeId a = m.add_node("a", 1);
  const NodeId b = m.add_node("b");
  m.add_edge(a, b, 1, 1);
  m.sinks = {b};
  m.node_caps = std::vector<Rat>{4, 2};
  m.monotone = true;
  const auto mono = validate(Network(m));
  REQUIRE(mono.size() == 1);
  CHECK(mono[0].message.find("monotonicity") != std::string::npos);
}

TEST_CASE("edge congestion from shared paths") {
  const Network net = make_net({"a", "b", "m", "t"}, {{"a", "m", "1", 1}, {"b", "m", "1", 1}, {"m", "t", "1", 1}},
                               {{"a", "1/2"}, {"b", "1/3"}});
  PathFlow f;
  f.paths.push_back({path_of(net, {"a", "m", "t"}), R("1/2")});
  f.paths.push_back({path_of(net, {"b", "m", "t"}), R("1/3")});
  const FlowStats st = flow_stats(net, f);
  CHECK(st.ec == R("5/6"));
  // Edge-by-edge recomputation agrees with the aggregated value.
  Rat worst = 0;
  for (EdgeId e = 0; e < net.m(); ++e) {
    Rat load = 0;
    for (const FlowPath& fp : f.paths) {
      for (ArcId a : fp.path.arcs) {
        if (net.arc_edge(a) == e) load += fp.value;
      }
    }
    worst = max(worst, load / net.edge(e).cap);
  }
  CHECK(worst == st.ec);
}

TEST_CASE("exact arithmetic identities") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const long long a = 1 + static_cast<long long>(rng() % 1000);
    const long long b = 1 + static_cast<long long>(rng() % 1000);
    CHECK(Rat(Int(a), Int(b)) * Rat(Int(b), Int(a)) == 1);
  }
  for (int i = 0; i < 2000; ++i) {
    const long long d = static_cast<long long>(rng() % 10000);
    const long long c = 1 + static_cast<long long>(rng() % 10000);
    CHECK(ceil_div(d, c) == (d + c - 1) / c);
  }
}
