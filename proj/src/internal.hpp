// Helpers shared between translation units; not part of the public API.
#pragma once

#include "confluent/network.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace confluent::detail {

inline constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max();

// Shortest length from every node to `sink`, never leaving another sink.
std::vector<std::int64_t> distances_to(const Network& net, NodeId sink);

// Dijkstra tree toward `sink`: each node that reaches it gets the first arc
// of one shortest path. Acyclic even with zero-length arcs.
ConfluentRouting shortest_path_tree(const Network& net, NodeId sink);

// Keeps only the out-arcs on the tree paths of `sources`.
ConfluentRouting restrict_routing(const Network& net, const ConfluentRouting& r,
                                  const std::vector<NodeId>& sources);

}  // namespace confluent::detail
