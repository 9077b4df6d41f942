#include "confluent/monotonic.hpp"
#include "confluent/staticflow.hpp"
#include "corpora.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace confluent;
using namespace confluent::testing;

namespace {

// Node-capacitated monotone network; edges carry a nominal capacity.
Network mono(const std::vector<std::pair<std::string, std::string>>& caps,
             const std::vector<std::pair<std::string, std::string>>& edges,
             const std::vector<std::pair<std::string, std::string>>& supplies, bool monotone = true) {
  Json doc;
  doc["directed"] = true;
  doc["monotone"] = monotone;
  Json nodes = Json::array(), nc = Json::object(), es = Json::array(), sup = Json::object();
  for (const auto& [n, c] : caps) {
    nodes.push_back(n);
    nc[n] = c;
  }
  for (const auto& [u, v] : edges) es.push_back(Json{{"u", u}, {"v", v}, {"cap", "1"}, {"len", 1}});
  for (const auto& [n, d] : supplies) sup[n] = d;
  doc["nodes"] = nodes;
  doc["node_caps"] = nc;
  doc["edges"] = es;
  doc["supplies"] = sup;
  doc["sinks"] = Json::array({"t"});
  return network_from_json(doc);
}

PathFlow along(const Network& net, const std::vector<std::string>& nodes, const std::string& v) {
  PathFlow f;
  f.paths.push_back({path_of(net, nodes), R(v)});
  return f;
}

void check_linked(const Network& net, const MonotoneResult& mr) {
  CHECK(check_confluent(net, mr.routing, net.sources()).empty());
  const FlowStats st = flow_stats(net, mr.flow);
  CHECK(st.value == net.total_supply());
  for (NodeId v : net.sources()) CHECK(st.delivered[v] == net.supply(v));
  CHECK(mr.routing.out_arc.size() == static_cast<std::size_t>(net.n()));
  for (NodeId v = 0; v < net.n(); ++v) {
    if (mr.routing.out_arc[v] != kNone) CHECK(net.tail(mr.routing.out_arc[v]) == v);
  }
}

}  // namespace

TEST_CASE("default base") {
  CHECK(default_base(1) == 2);
  CHECK(default_base(2) == 2);
  CHECK(default_base(4) == 16);
  CHECK(default_base(16) == 256);
}

TEST_CASE("uniform capacities give one class and no dummies") {
  const Network net = mono({{"s", "2"}, {"a", "2"}, {"t", "2"}}, {{"s", "a"}, {"a", "t"}}, {{"s", "1"}});
  const ClassDecomposition dec = decompose_classes(net, along(net, {"s", "a", "t"}, "1"), 2);
  CHECK(dec.classes.size() == 1);
  CHECK(dec.dummy_nodes.empty());
  CHECK(dec.r == 1);
  CHECK(dec.scale == 2);
  const CapacityClass& c = dec.classes[0];
  CHECK(c.net.n() == 3);
  CHECK(c.flow.paths.size() == 1);
  CHECK(c.induced[0] == 1);
}

TEST_CASE("chain with capacities 1, b, b^2 splits into two adjacent classes") {
  const Network net = mono({{"s", "1"}, {"a", "2"}, {"t", "4"}}, {{"s", "a"}, {"a", "t"}}, {{"s", "1"}});
  const ClassDecomposition dec = decompose_classes(net, along(net, {"s", "a", "t"}, "1"), 2);
  CHECK(dec.r == 3);
  REQUIRE(dec.classes.size() == 2);
  CHECK(dec.dummy_nodes.empty());
  CHECK(dec.level == std::vector<int>{0, 1, 2});
  const CapacityClass& c0 = dec.classes[0];
  const CapacityClass& c1 = dec.classes[1];
  CHECK(c0.level == 0);
  CHECK(c1.level == 1);
  // a is a sink of class 0 and an induced source of class 1.
  CHECK(c0.net.is_sink(c0.net.id("a")));
  CHECK(c1.induced[c1.net.id("a")] == 1);
  CHECK(c1.induced_sources == 1);
  CHECK(c1.original_sources == 0);
  CHECK(c0.original_sources == 1);

  const MonotoneResult mr = route_monotone(net, along(net, {"s", "a", "t"}, "1"), 2, 3, 11);
  check_linked(net, mr);
  CHECK(mr.nc == 1);
}

TEST_CASE("an edge jumping from capacity 1 to b^3 gets exactly one dummy") {
  const Network net = mono({{"s", "1"}, {"u", "1"}, {"t", "8"}}, {{"s", "t"}, {"u", "t"}, {"s", "u"}},
                           {{"s", "1/2"}, {"u", "1/4"}});
  PathFlow f;
  f.paths.push_back({path_of(net, {"s", "t"}), R("1/4")});
  f.paths.push_back({path_of(net, {"s", "u", "t"}), R("1/4")});
  f.paths.push_back({path_of(net, {"u", "t"}), R("1/4")});
  const ClassDecomposition dec = decompose_classes(net, f, 2);
  CHECK(dec.dummy_nodes.size() == 2);
  REQUIRE(dec.classes.size() == 1);
  const CapacityClass& c = dec.classes[0];
  int dummies = 0;
  for (NodeId v = 0; v < c.net.n(); ++v) {
    if (c.global[v] != kNone) continue;
    ++dummies;
    CHECK(c.net.is_sink(v));
    CHECK(c.induced[v] == 0);
    CHECK(c.net.supply(v) == 0);
  }
  CHECK(dummies == 2);
  for (const DummyNode& d : dec.dummy_nodes) CHECK(d.cls == 1);

  // Two paths over the same jump edge share its dummy.
  const Network one = mono({{"s", "1"}, {"t", "8"}}, {{"s", "t"}}, {{"s", "1/2"}});
  PathFlow g;
  g.paths.push_back({path_of(one, {"s", "t"}), R("1/4")});
  g.paths.push_back({path_of(one, {"s", "t"}), R("1/4")});
  CHECK(decompose_classes(one, g, 2).dummy_nodes.size() == 1);

  const MonotoneResult mr = route_monotone(net, f, 2, 3, 5);
  check_linked(net, mr);
}

TEST_CASE("decompose preconditions") {
  const Network plain = mono({{"s", "1"}, {"t", "1"}}, {{"s", "t"}}, {{"s", "1"}}, false);
  CHECK_THROWS_AS(decompose_classes(plain, along(plain, {"s", "t"}, "1"), 2), PreconditionViolated);
  const Network net = mono({{"s", "1"}, {"a", "1"}, {"t", "1"}}, {{"s", "a"}, {"a", "t"}}, {{"s", "1"}});
  CHECK_THROWS_AS(decompose_classes(net, along(net, {"s", "a", "t"}, "2"), 2), PreconditionViolated);
  CHECK_THROWS_AS(decompose_classes(net, along(net, {"s", "a", "t"}, "1/2"), 2), PreconditionViolated);
  CHECK_THROWS_AS(decompose_classes(net, along(net, {"s", "a", "t"}, "1"), 1), PreconditionViolated);
  const Network down = mono({{"s", "2"}, {"a", "1"}, {"t", "4"}}, {{"s", "a"}, {"a", "t"}}, {{"s", "1"}});
  CHECK_THROWS_AS(decompose_classes(down, along(down, {"s", "a", "t"}, "1"), 2), PreconditionViolated);
}

TEST_CASE("single-class network with one source keeps its unique path") {
  const Network net = mono({{"s", "1"}, {"a", "1"}, {"t", "1"}}, {{"s", "a"}, {"a", "t"}}, {{"s", "1"}});
  const MonotoneResult mr = route_monotone(net, along(net, {"s", "a", "t"}, "1"), 2, 1, 0);
  check_linked(net, mr);
  CHECK(mr.nc == 1);
  CHECK(mr.length == 2);
}

TEST_CASE("relaxed routing: one source and two crossing demands") {
  const Network one = mono({{"s", "1"}, {"a", "1"}, {"b", "1"}, {"t", "2"}},
                           {{"s", "a"}, {"s", "b"}, {"a", "t"}, {"b", "t"}}, {{"s", "1"}});
  const MonotoneResult r1 = route_monotone_relaxed(one, 0, 2, 3);
  check_linked(one, r1);
  CHECK(r1.nc <= 2);

  // x and y each reach t through either a or b; a confluent tree exists.
  const Network two = mono({{"x", "2"}, {"y", "2"}, {"a", "2"}, {"b", "2"}, {"t", "4"}},
                           {{"x", "a"}, {"x", "b"}, {"y", "a"}, {"y", "b"}, {"a", "t"}, {"b", "t"}},
                           {{"x", "1"}, {"y", "1"}});
  const MonotoneResult r2 = route_monotone_relaxed(two, 0, 2, 9);
  check_linked(two, r2);

  const Network nba = mono({{"s", "1"}, {"t", "1"}}, {{"s", "t"}}, {{"s", "2"}});
  CHECK_THROWS_AS(route_monotone_relaxed(nba, 0, 1, 0), PreconditionViolated);
  const Network cut = mono({{"s", "1"}, {"a", "1"}, {"t", "1"}}, {{"s", "a"}}, {{"s", "1"}});
  CHECK_THROWS_AS(route_monotone_relaxed(cut, 0, 1, 0), Infeasible);
}

TEST_CASE("random monotone networks: linking, class counts and capacity rounding") {
  int routed = 0;
  for (const Network& net : corpora::monotone_corpus(25, 606)) {
    MonotoneResult mr;
    try {
      mr = route_monotone_relaxed(net, 2, 4, 17);
    } catch (const Infeasible&) {
      continue;
    }
    ++routed;
    check_linked(net, mr);
    const ClassDecomposition& dec = mr.decomposition;
    for (const CapacityClass& c : dec.classes) {
      CHECK(c.induced_sources <= net.kappa() + c.original_sources);
      for (NodeId u = 0; u < c.net.n(); ++u) {
        if (c.global[u] == kNone) CHECK(c.net.is_sink(u));
      }
    }
    // Rounded capacities sit in [c, b*c) for the doubled network.
    for (NodeId v = 0; v < net.n(); ++v) {
      const Rat cap = net.node_cap(v) * 2;
      const Rat rounded = dec.scale * pow(Rat(dec.base), dec.level[v]);
      CHECK(rounded >= cap);
      CHECK(rounded < cap * Rat(dec.base));
    }
    const Rat doubled_nc = mr.nc / 2;
    CHECK(mr.nc_rounded <= doubled_nc);
    CHECK(doubled_nc <= mr.nc_rounded * Rat(dec.base));
  }
  CHECK(routed >= 10);
}

TEST_CASE("route_monotone is deterministic in its seed") {
  const auto nets = corpora::monotone_corpus(6, 9090);
  for (const Network& net : nets) {
    try {
      const MonotoneResult a = route_monotone_relaxed(net, 2, 3, 123);
      const MonotoneResult b = route_monotone_relaxed(net, 2, 3, 123, 3);
      CHECK(a.routing.out_arc == b.routing.out_arc);
      CHECK(a.nc == b.nc);
    } catch (const Infeasible&) {
    }
  }
}
