// Splittable static flows: max flow, length-bounded flow, decomposition,
// unsplittable rounding and the node-split reduction.
#pragma once

#include "confluent/network.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace confluent {

// caps[v] > 0 marks v as a source that may send at most caps[v]. Edge
// capacities are honoured, node capacities are not (use node_to_edge first).
PathFlow max_flow(const Network& net, const std::vector<Rat>& caps, NodeId sink);
Rat max_flow_value(const Network& net, const std::vector<Rat>& caps, NodeId sink);

// Maximum flow whose paths all have length <= budget, with per-source caps.
PathFlow length_bounded_max_flow(const Network& net, const std::vector<Rat>& caps, NodeId sink,
                                 std::int64_t budget);
// Routes every demands[v] with EC <= 1 and length <= budget, or nullopt.
std::optional<PathFlow> length_bounded_flow(const Network& net, const std::vector<Rat>& demands,
                                            NodeId sink, std::int64_t budget);

// Arc flow (indexed by ArcId) to paths. Cycles are dropped. Every non-sink
// node with net outflow is a source; a non-sink node with net inflow throws
// PreconditionViolated.
PathFlow decompose(const Network& net, const std::vector<Rat>& arc_flow);
// Aggregate, cancel cycles and decompose again. Keeps per-source values.
PathFlow cancel_cycles(const Network& net, const PathFlow& f);

// One path per positive demand, EC <= 2. Throws Infeasible when no
// splittable routing exists, PreconditionViolated when some demand exceeds
// the smallest capacity, GuardExceeded when the search budget runs out.
PathFlow unsplittable_flow(const Network& net, const std::vector<Rat>& demands, NodeId sink,
                           std::int64_t node_budget = 2'000'000);

// Node v becomes v/in -> v/out with capacity c(v); sinks stay whole.
struct NodeSplit {
  Network net;
  std::vector<NodeId> in;
  std::vector<NodeId> out;
  std::vector<EdgeId> split_edge;  // per original node, kNone for sinks
  std::vector<ArcId> origin;       // per split edge: original arc or kNone
};
NodeSplit node_to_edge_capacitated(const Network& net);
// Paths on the split network back to the original network.
PathFlow map_back(const Network& net, const NodeSplit& ns, const PathFlow& f);

}  // namespace confluent
