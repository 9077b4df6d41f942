// Discrete-time fluid simulation of dynamic flows, the static/dynamic
// transformations and the Quickest Flow and Max Flow Over Time drivers.
#pragma once

#include "confluent/multilayer.hpp"
#include "confluent/network.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace confluent {

struct TraceRow {
  std::int64_t t = 0;
  ArcId arc = kNone;
  Rat load;   // entered the arc during step t
  Rat queue;  // waiting at the arc's tail after step t
};

struct SimTrace {
  std::int64_t horizon = 0;           // last simulated step
  std::int64_t makespan = 0;          // last arrival at a sink, 0 when nothing moved
  bool complete = false;              // every released unit arrived
  Rat injected;
  Rat delivered;
  std::vector<Rat> delivered_cum;     // per step 0..horizon
  std::vector<Rat> delivered_by_source;  // per node
  std::vector<TraceRow> rows;         // steps with load or queue only
  Rat max_entry_congestion;           // max over steps and edges of entered / c(e)

  Rat delivered_by(std::int64_t T) const;
};

struct SimOptions {
  std::int64_t horizon_cap = 10'000'000;  // GuardExceeded beyond this
  bool record_rows = true;
};

// FIFO per arc, ordered by (arrival step, source index, stream index). Up to
// c(e) units enter an edge per step (both directions share it when the edge
// is undirected); a unit may leave a node in the step it arrived. Throws
// PathError for invalid paths and GuardExceeded past the horizon cap.
SimTrace simulate(const Network& net, const DynamicRouting& routing, const SimOptions& opt = {});

std::string trace_csv(const Network& net, const SimTrace& trace);

// Static flow of d_i / T along the streams' paths. The divisor is T + 1 when
// some path ends with a zero-length arc, since such an arc can be entered in
// T + 1 distinct steps. Throws Infeasible when the routing is not done by T.
PathFlow trans1(const Network& net, const DynamicRouting& routing, std::int64_t T);
// Divisor used by trans1 for these paths.
std::int64_t trans1_divisor(const Network& net, const std::vector<Path>& paths, std::int64_t T);

// Sends f_j per step along P_j for z steps. Throws PreconditionViolated when
// L(f) > T.
DynamicRouting trans2(const Network& net, const PathFlow& f, std::int64_t z, std::int64_t T);

struct Probe {
  std::int64_t T = 0;
  bool feasible = false;
};

struct SolveOptions {
  int trials = 8;
  std::uint64_t seed = 0;
  Int base = 0;
  int jobs = 1;
  Rat budget_multiplier = 2;
};

struct QuickestResult {
  DynamicRouting routing;
  std::int64_t claimed_time = 0;
  Rat delivered_fraction = 1;
  std::int64_t lower_bound = 0;   // no splittable dynamic flow finishes earlier
  Rat time_factor;                // claimed_time / lower_bound
  Rat ec;                         // EC of the tree with full supplies
  std::int64_t length = 0;
  std::int64_t z = 0;
  std::string schedule;           // "trans2" or "greedy"
  std::vector<Probe> probes;
  int attached = 0;               // sources routed outside the pipeline's tree
  StaticResult pipeline;
};

QuickestResult solve_quickest(const Network& net, const SolveOptions& opt);

struct MaxFlowOverTimeResult {
  DynamicRouting routing;
  Rat delivered;                 // simulated, all of it arrives by `makespan`
  std::int64_t makespan = 0;
  std::int64_t T = 0;
  Rat horizon_factor;            // makespan / T
  std::int64_t candidate = 0;    // static horizon whose flow was used, 0 for none
  Rat static_value;              // splittable length-bounded value at the candidate
};

// Per-candidate static results. Reusable across horizons for one network
// and one set of options, which keeps T sweeps cheap.
struct MfotCandidate {
  std::vector<Rat> rate;         // per node, zero when not selected
  ConfluentRouting tree;
  Rat static_value;
};
struct MfotMemo {
  std::map<std::int64_t, MfotCandidate> by_candidate;
};

MaxFlowOverTimeResult solve_maxflow_over_time(const Network& net, std::int64_t T,
                                              const SolveOptions& opt, MfotMemo* memo = nullptr);

// Horizons tried for T: every value up to T_min + 32, then powers of two.
// The set only grows with T.
std::vector<std::int64_t> mfot_candidates(std::int64_t T_min, std::int64_t T);

}  // namespace confluent
