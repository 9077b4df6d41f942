// Randomized rounding of a splittable flow into a multi-sink confluent flow
// on uncapacitated networks with uniform supplies.
#pragma once

#include "confluent/network.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace confluent {

// Support of a flow with selection probabilities p(a) = f(a) / f_out(tail).
struct FlowDag {
  std::vector<Rat> flow;                // per arc
  std::vector<Rat> p;                   // per arc, zero off the support
  std::vector<std::vector<ArcId>> out;  // support arcs leaving each node
  std::vector<std::vector<ArcId>> in;   // support arcs entering each node
  std::vector<NodeId> topo;             // tails before heads
};

// Throws PreconditionViolated when the support has a cycle.
FlowDag induce_dag(const Network& net, const PathFlow& f);

struct RoundingDiagnostics {
  std::vector<int> congestion;  // sources in the subtree rooted at each node
  int max_congestion = 0;
  std::vector<std::pair<NodeId, int>> tree_heights;       // per sink
  std::vector<std::pair<NodeId, int>> effective_heights;  // per sink
  int height = 0;
  int effective_height = 0;
  std::vector<Rat> expected_congestion;  // C_D(v)
  Rat expected_max;                      // max_v C_D(v)
};

// Positive-supply non-sink nodes.
std::vector<bool> source_mask(const Network& net);

// Exact expectation of the subtree source count under the rounding process.
std::vector<Rat> expected_congestion(const Network& net, const FlowDag& dag,
                                     const std::vector<bool>& is_source);

// Independent per-trial seed; results do not depend on evaluation order.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);

// Picks one support arc per node with outflow. u64 draws are compared with
// the exact cumulative probabilities at 64-bit resolution.
ConfluentRouting round_once(const Network& net, const FlowDag& dag, std::uint64_t seed);

RoundingDiagnostics diagnostics(const Network& net, const FlowDag& dag, const ConfluentRouting& r);

struct RoundResult {
  ConfluentRouting routing;
  RoundingDiagnostics diag;
  int trial = 0;
};

// Best of `trials` roundings by (max congestion, trial index). Rejects
// non-uniform positive supplies with PreconditionViolated.
RoundResult round_best(const Network& net, const FlowDag& dag, int trials, std::uint64_t seed,
                       int jobs = 1);

// ceil(c * ln n), at least 1.
int default_trials(int n, double c);

}  // namespace confluent
