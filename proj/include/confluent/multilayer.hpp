// k-layer monotone network for edge-capacitated single-sink instances,
// supply grouping, routing on the layers and re-routing to the base graph.
#pragma once

#include "confluent/monotonic.hpp"
#include "confluent/network.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace confluent {

struct SupplyGroup {
  int exponent = 0;  // supplies in this group round up to 2^exponent
  Rat size;
  std::vector<NodeId> sources;
};

struct SupplyGroups {
  std::vector<SupplyGroup> groups;  // ascending size
  std::vector<NodeId> dropped;      // d <= d_max / (2 kappa)
  Rat d_max;
};

SupplyGroups group_supplies(const Network& net, const std::vector<Rat>& demands);
inline SupplyGroups group_supplies(const Network& net) { return group_supplies(net, net.supplies()); }

// Capacities rounded up to powers of two, clamped to kappa * d_max (also
// rounded up), edges below the group size deleted, everything divided by the
// group size. Node ids are unchanged; group sources get unit supply.
struct PreparedGroup {
  Network net;
  std::vector<EdgeId> origin;  // prepared edge -> original edge
  Rat unit;
};
PreparedGroup prepare_group(const Network& net, const SupplyGroup& group, int kappa,
                            const Rat& d_max);

enum class LayerArc { Vertical, Horizontal, SinkEntry, SinkChain, SinkExit };

struct LayeredNetwork {
  Network h;
  int k = 0;
  std::vector<NodeId> copy;        // base node * k + layer -> H node, kNone for the sink
  std::vector<NodeId> base_node;   // per H node; the sink and its copies map to the sink
  std::vector<int> layer;          // per H node, -1 for the sink
  std::vector<bool> dummy_sink;    // per H node
  std::vector<ArcId> base_arc;     // per H edge: base arc for vertical and entry arcs
  std::vector<LayerArc> kind;      // per H edge
  std::vector<EdgeId> chain_of;    // per H edge: base edge owning a sink chain, else kNone

  NodeId at(NodeId v, int i) const { return copy[static_cast<std::size_t>(v) * k + i]; }
};

// Needs a single sink and capacities that are powers of two, at least 1.
LayeredNetwork build_layers(const Network& base);

struct LayerRouting {
  ConfluentRouting routing;  // on H
  PathFlow flow;             // unit supplies along the routing
  Rat nc;
  std::int64_t length = 0;
  std::vector<ClassStat> classes;
};

// Splittable check on the node-split H (length-bounded when a budget is
// given), then confluent rounding through capacity classes. Throws
// Infeasible when the splittable check fails.
LayerRouting route_layers(const LayeredNetwork& H, std::optional<std::int64_t> budget,
                          const Int& base, int trials, std::uint64_t seed, int jobs = 1);

struct RerouteResult {
  ConfluentRouting routing;  // on the base network, only arcs used by kept sources
  std::vector<NodeId> kept;
  std::vector<NodeId> discarded;
  std::vector<int> commit;   // per base node: committed layer or -1
  Rat ec;                    // edge congestion of the kept unit flow on the base network
  Rat nc;                    // node load over 2^(committed layer)
  std::int64_t length = 0;
  bool searched = false;     // a fallback search ran
};

RerouteResult reroute_to_base(const Network& base, const LayeredNetwork& H, const LayerRouting& h,
                              std::uint64_t seed = 0);

// Largest subset of the tree items that routes with EC <= 1 after the
// tree's arcs, aiming at value >= c * sum(gamma_i d_i). Exact when there are
// at most 16 items, greedy otherwise.
std::vector<NodeId> select_demands_on_tree(const Network& net, const ConfluentRouting& tree,
                                           const std::vector<NodeId>& items,
                                           const std::vector<Rat>& gamma,
                                           const std::vector<Rat>& demands);

struct PipelineOptions {
  std::optional<std::int64_t> budget;
  int trials = 8;
  std::uint64_t seed = 0;
  Int base = 0;  // 0 picks the default
  int jobs = 1;
  bool select = true;
};

struct GroupReport {
  Rat size;
  int sources = 0;
  int kept = 0;
  int cap_doublings = 0;  // H capacities were multiplied by 2^this
  bool feasible = false;
  Rat nc_h;
  Rat ec;                 // selected sources, original capacities, real supplies
  Rat kept_ec;            // same for every kept source, before selection
  Rat kept_value;
  Rat selected_value;
  std::int64_t length = 0;
  int k = 0;
};

struct StaticResult {
  bool infeasible = true;
  ConfluentRouting routing;      // tree over the delivered sources
  std::vector<NodeId> delivered;
  Rat value;
  Rat ec;
  std::int64_t length = 0;
  int best_group = -1;
  std::vector<GroupReport> groups;
  SupplyGroups grouping;
  // Bookkeeping, all with real supplies; they sum to the total supply.
  Rat dropped_value;
  Rat unreachable_value;
  Rat other_groups_value;
  Rat reroute_discarded_value;
  Rat selection_discarded_value;
};

// Group, build layers, route, re-route, scale by measured congestion and
// (optionally) select a feasible subset on the tree. Best group wins by
// (value, group index).
StaticResult demand_max_static(const Network& net, const std::vector<Rat>& demands,
                               const PipelineOptions& opt);

}  // namespace confluent
