// Exhaustive solvers for small instances: every confluent tree, exact
// dynamic evaluation per tree.
#pragma once

#include "confluent/network.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace confluent {

struct OracleResult {
  std::int64_t best_time = 0;      // quickest
  Rat best_value;                  // max flow over time, demand maximization
  ConfluentRouting best_routing;
  std::vector<NodeId> best_subset; // demand maximization
  std::int64_t instances_enumerated = 0;
};

inline constexpr std::int64_t kTreeGuard = 1'000'000;

// Calls `visit` once per confluent tree routing every node in `cover`
// (defaults to every positive-supply node). Only nodes on those paths get an
// out-arc. Throws GuardExceeded when the product of candidate out-degrees
// exceeds `guard`, Infeasible when a node in `cover` cannot reach a sink.
void enumerate_confluent_trees(const Network& net,
                               const std::function<void(const ConfluentRouting&)>& visit,
                               std::int64_t guard = kTreeGuard);
void enumerate_confluent_trees(const Network& net, const std::vector<NodeId>& cover,
                               const std::function<void(const ConfluentRouting&)>& visit,
                               std::int64_t guard = kTreeGuard);

// Minimum greedy makespan over all trees. Within a tree the greedy
// work-conserving FIFO schedule is optimal in the fluid model.
OracleResult oracle_quickest(const Network& net, std::int64_t guard = kTreeGuard);

// Maximum greedy delivery by T over all trees.
OracleResult oracle_maxflow_over_time(const Network& net, std::int64_t T,
                                      std::int64_t guard = kTreeGuard);

// Maximum static value of a source subset routable with EC <= 1 on one tree.
OracleResult oracle_demand_max(const Network& net, std::int64_t guard = kTreeGuard);

// Earliest time the tree can deliver every supply, from max flows on the
// time-expanded network restricted to the tree (holdover allowed).
std::int64_t time_expanded_makespan(const Network& net, const ConfluentRouting& tree);
// Quickest time by tree enumeration and time-expanded max flow.
std::int64_t oracle_quickest_time_expanded(const Network& net, std::int64_t guard = kTreeGuard);

}  // namespace confluent
