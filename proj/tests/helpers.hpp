// Small builders shared by the unit tests.
#pragma once

#include "confluent/io.hpp"
#include "confluent/network.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace confluent::testing {

struct E {
  std::string u, v;
  std::string cap;
  std::int64_t len;
};

inline Network make_net(const std::vector<std::string>& nodes, const std::vector<E>& edges,
                        const std::vector<std::pair<std::string, std::string>>& supplies,
                        const std::string& sink = "t", bool directed = true) {
  Json doc;
  doc["directed"] = directed;
  doc["nodes"] = nodes;
  Json es = Json::array();
  for (const E& e : edges) es.push_back(Json{{"u", e.u}, {"v", e.v}, {"cap", e.cap}, {"len", e.len}});
  doc["edges"] = es;
  Json sup = Json::object();
  for (const auto& [n, d] : supplies) sup[n] = d;
  doc["supplies"] = sup;
  doc["sinks"] = Json::array({sink});
  return network_from_json(doc);
}

// s -> t with one edge.
inline Network single_edge(const std::string& d, const std::string& c, std::int64_t len) {
  return make_net({"s", "t"}, {{"s", "t", c, len}}, {{"s", d}});
}

// s -> a -> t and s -> b -> t.
inline Network diamond(const std::string& cap_a = "1", const std::string& cap_b = "1",
                       std::int64_t len_a = 1, std::int64_t len_b = 1, const std::string& d = "4") {
  return make_net({"s", "a", "b", "t"},
                  {{"s", "a", cap_a, len_a}, {"a", "t", cap_a, len_a}, {"s", "b", cap_b, len_b},
                   {"b", "t", cap_b, len_b}},
                  {{"s", d}});
}

// Arc from u to v (first match).
inline ArcId arc(const Network& net, const std::string& u, const std::string& v) {
  const NodeId a = net.id(u), b = net.id(v);
  for (ArcId x : net.out_arcs(a)) {
    if (net.head(x) == b) return x;
  }
  return kNone;
}

inline Path path_of(const Network& net, const std::vector<std::string>& nodes) {
  Path p{net.id(nodes.front()), {}};
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) p.arcs.push_back(arc(net, nodes[i], nodes[i + 1]));
  return p;
}

inline Rat R(const std::string& s) { return Rat::parse(s); }

// Same network with nodes and edges in a random order.
inline Network relabel(const Network& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<NodeId> perm(net.n());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<EdgeId> order(net.m());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  NetworkSpec spec;
  spec.directed = net.directed();
  std::vector<NodeId> where(net.n());
  for (NodeId i = 0; i < net.n(); ++i) where[perm[i]] = i;
  for (NodeId i = 0; i < net.n(); ++i) spec.add_node(net.name(perm[i]), net.supply(perm[i]));
  for (EdgeId e : order) spec.add_edge(where[net.edge(e).u], where[net.edge(e).v], net.edge(e).cap, net.edge(e).len);
  for (NodeId t : net.sinks()) spec.sinks.push_back(where[t]);
  return Network(std::move(spec));
}

}  // namespace confluent::testing
