// Networks, static path flows, confluent routings and dynamic schedules.
#pragma once

#include "confluent/rational.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace confluent {

using NodeId = int;
using EdgeId = int;
// Arc 2e traverses edge e from u to v; arc 2e+1 traverses it from v to u and
// exists only in undirected networks.
using ArcId = int;
inline constexpr int kNone = -1;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SchemaError : public Error {
 public:
  using Error::Error;
};
class ParseError : public Error {
 public:
  using Error::Error;
};
class PathError : public Error {
 public:
  using Error::Error;
};
class Infeasible : public Error {
 public:
  using Error::Error;
};
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  Rat cap = 1;
  std::int64_t len = 0;
};

// Mutable description used to assemble a Network.
struct NetworkSpec {
  bool directed = true;
  bool monotone = false;
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  std::vector<Rat> supply;
  std::vector<NodeId> sinks;
  std::optional<std::vector<Rat>> node_caps;

  NodeId add_node(std::string name, Rat d = 0);
  EdgeId add_edge(NodeId u, NodeId v, Rat cap, std::int64_t len);
};

// Immutable network with arc adjacency.
class Network {
 public:
  Network() = default;
  explicit Network(NetworkSpec spec);

  const NetworkSpec& spec() const { return spec_; }
  int n() const { return static_cast<int>(spec_.nodes.size()); }
  int m() const { return static_cast<int>(spec_.edges.size()); }
  bool directed() const { return spec_.directed; }
  bool monotone() const { return spec_.monotone; }

  const std::string& name(NodeId v) const { return spec_.nodes[v]; }
  std::optional<NodeId> find(std::string_view name) const;
  NodeId id(std::string_view name) const;

  const Edge& edge(EdgeId e) const { return spec_.edges[e]; }
  const Rat& supply(NodeId v) const { return spec_.supply[v]; }
  const std::vector<Rat>& supplies() const { return spec_.supply; }
  bool is_sink(NodeId v) const { return is_sink_[v]; }
  const std::vector<NodeId>& sinks() const { return spec_.sinks; }
  // The unique sink; throws PreconditionViolated when there is not exactly one.
  NodeId sink() const;
  bool has_node_caps() const { return spec_.node_caps.has_value(); }
  const Rat& node_cap(NodeId v) const { return (*spec_.node_caps)[v]; }

  std::vector<NodeId> sources() const;
  int kappa() const;
  Rat total_supply() const;
  Rat c_min() const;
  Rat c_max() const;
  std::int64_t total_length() const;

  int num_arcs() const { return 2 * m(); }
  bool arc_exists(ArcId a) const {
    return a >= 0 && a < num_arcs() && (a % 2 == 0 || !directed());
  }
  EdgeId arc_edge(ArcId a) const { return a / 2; }
  NodeId tail(ArcId a) const { return a % 2 == 0 ? edge(a / 2).u : edge(a / 2).v; }
  NodeId head(ArcId a) const { return a % 2 == 0 ? edge(a / 2).v : edge(a / 2).u; }
  const Rat& arc_cap(ArcId a) const { return edge(a / 2).cap; }
  std::int64_t arc_len(ArcId a) const { return edge(a / 2).len; }
  const std::vector<ArcId>& out_arcs(NodeId v) const { return out_[v]; }
  const std::vector<ArcId>& in_arcs(NodeId v) const { return in_[v]; }

 private:
  NetworkSpec spec_;
  std::vector<bool> is_sink_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
  std::unordered_map<std::string, NodeId> index_;
};

struct Path {
  NodeId start = kNone;
  std::vector<ArcId> arcs;

  std::vector<NodeId> nodes(const Network& net) const;
  NodeId end(const Network& net) const;
  std::int64_t length(const Network& net) const;
  friend bool operator==(const Path&, const Path&) = default;
};

struct FlowPath {
  Path path;
  Rat value;
};

struct PathFlow {
  std::vector<FlowPath> paths;
  Rat value() const;
};

// out_arc[v] is the single arc leaving v, or kNone.
struct ConfluentRouting {
  std::vector<ArcId> out_arc;
  friend bool operator==(const ConfluentRouting&, const ConfluentRouting&) = default;
};

// Release `rate` units into the stream at every step of
// [start, start + duration).
struct Release {
  std::int64_t start = 0;
  Rat rate;
  std::int64_t duration = 1;
};

struct Stream {
  NodeId source = kNone;
  Path path;
  std::vector<Release> schedule;
  Rat total() const;
};

struct DynamicRouting {
  std::vector<Stream> streams;
  std::optional<ConfluentRouting> tree;
  Rat total() const;
};

struct Violation {
  std::string element;
  std::string message;
};

std::vector<Violation> validate(const Network& net);
// Arc existence, contiguity and termination at a sink.
std::vector<Violation> check_path(const Network& net, const Path& p);
// One out-arc per node, acyclic, arcs leave their node, and every node in
// `must_route` reaches a sink.
std::vector<Violation> check_confluent(const Network& net, const ConfluentRouting& r,
                                       const std::vector<NodeId>& must_route);

// Path from v along the routing to a sink. Throws PathError on a cycle or a
// dead end.
Path tree_path(const Network& net, const ConfluentRouting& r, NodeId v);
bool reaches_sink(const Network& net, const ConfluentRouting& r, NodeId v);
// Each node with positive values[v] sends that amount along its tree path.
PathFlow routing_flow(const Network& net, const ConfluentRouting& r,
                      const std::vector<Rat>& values);
// Greedy schedule: all of values[v] is released at time 0.
DynamicRouting greedy_schedule(const Network& net, const ConfluentRouting& r,
                               const std::vector<Rat>& values);
ConfluentRouting empty_routing(const Network& net);

struct FlowStats {
  std::vector<Rat> arc_flow;
  std::vector<Rat> edge_flow;
  std::vector<Rat> node_out;
  Rat ec;
  std::optional<Rat> nc;
  std::int64_t length = 0;
  std::vector<Rat> delivered;
  Rat value;
};

FlowStats flow_stats(const Network& net, const PathFlow& f);
// Node throughput divided by capacity at non-sink nodes, all capacities 1
// when the network has none.
Rat node_congestion(const Network& net, const std::vector<Rat>& node_out);

}  // namespace confluent
