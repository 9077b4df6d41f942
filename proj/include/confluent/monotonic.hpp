// Confluent routing in node-capacitated monotone networks by capacity
// classes: round each class on its uncapacitated view, then link.
#pragma once

#include "confluent/network.hpp"
#include "confluent/rounding.hpp"

#include <cstdint>
#include <vector>

namespace confluent {

// A jump edge u -> v spanning more than one class gets one dummy node at
// class level(u)+1. It is a sink of class level(u) and is contracted into v.
struct DummyNode {
  ArcId arc = kNone;
  int cls = 0;
};

struct CapacityClass {
  int level = 0;
  Network net;                    // uncapacitated view, unit supplies
  std::vector<NodeId> global;     // local node -> original node, kNone for a dummy
  std::vector<ArcId> arc_origin;  // local edge -> original arc
  std::vector<Rat> induced;       // local node -> induced supply d_i(v)
  PathFlow flow;                  // f_i on the local network
  int induced_sources = 0;        // sources created by flow from lower classes
  int original_sources = 0;       // nodes of this level with d(v) > 0
};

struct ClassDecomposition {
  Int base = 2;
  Rat scale = 1;            // all capacities were divided by this
  std::vector<int> level;   // per original node
  std::vector<CapacityClass> classes;  // ascending level, non-empty only
  std::vector<DummyNode> dummy_nodes;
  int r = 0;                // number of levels spanned
};

// Preconditions: monotone-flagged valid network with node capacities, f
// routes every supply and NC(f) <= 1. Cycles in f are cancelled first.
ClassDecomposition decompose_classes(const Network& net, const PathFlow& f, const Int& base);

struct ClassStat {
  int level = 0;
  int rounding_congestion = 0;
  Rat sink_congestion;  // max load / rounded capacity over this class's sinks
  int induced_sources = 0;
  int original_sources = 0;
};

struct MonotoneResult {
  ConfluentRouting routing;
  PathFlow flow;
  Rat nc;                  // with the original capacities
  Rat nc_rounded;          // with capacities rounded up to powers of b
  std::int64_t length = 0;
  std::vector<ClassStat> classes;
  ClassDecomposition decomposition;
};

// max(2, ceil(log2(x)^4)).
Int default_base(int x);

MonotoneResult route_monotone(const Network& net, const PathFlow& f, const Int& base, int trials,
                              std::uint64_t seed, int jobs = 1);

// Single sink, NBA. Node split, congestion-2 unsplittable flow, capacities
// doubled, classes with base b (default from kappa), then route_monotone.
// Reported congestion is against the original capacities.
MonotoneResult route_monotone_relaxed(const Network& net, const Int& base, int trials,
                                      std::uint64_t seed, int jobs = 1);

// Same network with node capacities multiplied by `factor`.
Network scale_node_caps(const Network& net, const Rat& factor);

}  // namespace confluent
