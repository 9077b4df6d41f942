// Generators for the hard instances (half-grid, alpha/beta gadget, BO3DM
// gadget), tree families and cuts on the half-grid, and random corpora.
#pragma once

#include "confluent/network.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace confluent {

enum class Gadget { None, Yes, No };

Gadget parse_gadget(const std::string& s);
std::string gadget_name(Gadget g);

// Rows 1..N bottom to top, columns 1..N right to left; grid node (r, c)
// exists for r <= c. Row r runs from s_r at column N rightwards to column r,
// column c runs down from row c to t_c. Every grid node (r, c) with r < c
// has degree 4 and is replaced by the gadget when one is requested.
struct HalfGrid {
  int N = 0;
  Int M = 1;
  Gadget gadget = Gadget::None;
  int p = 1;  // nodes per embedded gadget, 1 when none
  Network net;
  std::vector<int> row;  // per node, 0 for s/t nodes
  std::vector<int> col;  // per node, 0 for s/t nodes
  NodeId t = kNone;
  std::vector<NodeId> s;        // s[r], index 0 unused
  std::vector<NodeId> tc;       // t_c, index 0 unused
  std::vector<EdgeId> root_edge;  // (t_c, t), index 0 unused
  // Edges between grid positions; kNone when absent. In a gadget grid the
  // endpoints are the gadget ports.
  EdgeId h_in(int r, int c) const { return h_in_[idx(r, c)]; }   // into (r, c) from the left
  EdgeId v_in(int r, int c) const { return v_in_[idx(r, c)]; }   // into (r, c) from above
  EdgeId down(int c) const { return down_[c]; }                   // (1, c) -> t_c
  // Entry node of a grid position for horizontal and vertical arrivals.
  NodeId h_port(int r, int c) const { return h_port_[idx(r, c)]; }
  NodeId v_port(int r, int c) const { return v_port_[idx(r, c)]; }
  NodeId h_exit(int r, int c) const { return h_exit_[idx(r, c)]; }
  NodeId v_exit(int r, int c) const { return v_exit_[idx(r, c)]; }

  std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * (N + 1) + c; }
  std::vector<EdgeId> h_in_, v_in_, down_;
  std::vector<NodeId> h_port_, v_port_, h_exit_, v_exit_;
  std::vector<EdgeId> internal_h, internal_v;  // gadget pass-through edges per position (Yes only)
};

HalfGrid gen_half_grid(int N, const Int& M, Gadget gadget);

// Row i goes right to column i, then down to t_i. Throws
// PreconditionViolated for the No gadget.
ConfluentRouting canonical_routing(const HalfGrid& hg);

// Source paths on the plain grid (gadget None), grouped into trees by the
// t_c they use.
struct TreeFamily {
  std::vector<Path> paths;
};

struct Crossing {
  int row = 0;
  int col = 0;
  std::size_t vertical = 0;    // path entering and leaving vertically
  std::size_t horizontal = 0;  // path entering and leaving horizontally
};

int path_root(const HalfGrid& hg, const Path& p);  // the c of the t_c on the path
std::optional<Crossing> find_crossing(const HalfGrid& hg, const TreeFamily& fam);
// Violations: paths not ending at t, paths sharing an edge but not the rest
// of the route.
std::vector<std::string> check_family(const HalfGrid& hg, const TreeFamily& fam);

TreeFamily canonical_family(const HalfGrid& hg);
// Each grid node of degree 4 gets one of: all leave horizontally, all leave
// vertically, or turn (horizontal in to vertical out and vice versa), plus
// straight-through crossing when allow_crossing. Sources are a random subset.
TreeFamily random_family(const HalfGrid& hg, std::uint64_t seed, bool allow_crossing = false);

struct CutResult {
  std::vector<EdgeId> edges;
  Rat weight;
  bool separates = false;      // reachability from the sources within each tree
  int iterations = 0;
  int fallbacks = 0;           // cut edges chosen outside the column rule
  std::vector<std::array<int, 3>> subgrids;  // (r_j, l_j, n_j)
};

// Throws PreconditionViolated on an invalid family or, with the witness,
// when two trees cross.
CutResult build_cut(const HalfGrid& hg, const TreeFamily& fam);

// Two sources into a two-disjoint-paths core; beta = 2 alpha.
struct GadgetInstance {
  std::string kind;
  Network net;
  Int alpha = 1;
  Int M = 1;
  int p = 0;
  std::int64_t T = 0;  // horizon for BO3DM
};

GadgetInstance gen_alphabeta(const Int& alpha, const Int& M, bool yes);

// Triples (a, b, c) with 0-based element indices below n; every element
// must occur in exactly M triples. `confluent` splits the hub s into one copy
// per source.
GadgetInstance gen_bo3dm(int n, const std::vector<std::array<int, 3>>& triples, int M,
                         bool confluent = false, const Rat& supply = 1, bool directed = false);

// Canonical row paths carrying the full supplies; confluent only with the
// Yes gadget, usable as an unsplittable routing otherwise.
PathFlow canonical_paths(const HalfGrid& hg);

struct CorpusSpec {
  int count = 10;
  int n_min = 4;
  int n_max = 8;
  int kappa_min = 1;
  int kappa_max = 4;
  int cap_min = 1;
  int cap_max = 3;
  int len_min = 1;
  int len_max = 3;
  int supply_min = 1;
  int supply_max = 3;
  double extra_edges = 1.0;  // extra edges per node beyond the spanning ones
  bool dag = true;
  bool directed = true;
  bool monotone = false;     // node capacities non-decreasing along edges
  bool pow2_caps = false;    // capacities 2^k with 2^k in [cap_min, cap_max]
};

std::vector<Network> gen_random_corpus(const CorpusSpec& spec, std::uint64_t seed);

// Uncapacitated layered DAG with unit supplies and a splittable flow of
// node congestion at most nc_target, sinks in the last layer. Places up to
// kappa sources; fewer when the congestion target leaves no room.
struct RoundingInstance {
  Network net;
  PathFlow flow;
  Rat nc;
};
RoundingInstance gen_rounding_instance(int layers, int width, int kappa, int nc_target,
                                       std::uint64_t seed);

}  // namespace confluent
