#include "confluent/instances.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace confluent {

Gadget parse_gadget(const std::string& s) {
  if (s == "none") return Gadget::None;
  if (s == "yes") return Gadget::Yes;
  if (s == "no") return Gadget::No;
  throw Error("unknown gadget '" + s + "' (expected none, yes or no)");
}

std::string gadget_name(Gadget g) {
  switch (g) {
    case Gadget::Yes: return "yes";
    case Gadget::No: return "no";
    default: return "none";
  }
}

namespace {

std::string rc(int r, int c) { return std::to_string(r) + "_" + std::to_string(c); }

}  // namespace

HalfGrid gen_half_grid(int N, const Int& M, Gadget gadget) {
  if (N < 1) throw PreconditionViolated("half-grid needs N >= 1");
  if (M < 1) throw PreconditionViolated("half-grid needs M >= 1");
  HalfGrid hg;
  hg.N = N;
  hg.M = M;
  hg.gadget = gadget;
  hg.p = gadget == Gadget::Yes ? 4 : gadget == Gadget::No ? 5 : 1;
  const std::size_t cells = static_cast<std::size_t>(N + 1) * (N + 1);
  hg.h_in_.assign(cells, kNone);
  hg.v_in_.assign(cells, kNone);
  hg.h_port_.assign(cells, kNone);
  hg.v_port_.assign(cells, kNone);
  hg.h_exit_.assign(cells, kNone);
  hg.v_exit_.assign(cells, kNone);
  hg.internal_h.assign(cells, kNone);
  hg.internal_v.assign(cells, kNone);
  hg.down_.assign(N + 1, kNone);
  hg.s.assign(N + 1, kNone);
  hg.tc.assign(N + 1, kNone);
  hg.root_edge.assign(N + 1, kNone);

  NetworkSpec spec;
  spec.directed = true;
  auto node = [&](std::string name, int r, int c, const Rat& d = 0) {
    hg.row.push_back(r);
    hg.col.push_back(c);
    return spec.add_node(std::move(name), d);
  };
  const Rat M2 = Rat(M) * Rat(M);
  for (int r = 1; r <= N; ++r) hg.s[r] = node("s" + std::to_string(r), 0, 0, M2 / Rat(r));
  for (int c = N; c >= 1; --c) {
    for (int r = c; r >= 1; --r) {
      const std::size_t k = hg.idx(r, c);
      if (gadget == Gadget::None || r == c) {
        const NodeId v = node("v" + rc(r, c), r, c);
        hg.h_port_[k] = hg.v_port_[k] = hg.h_exit_[k] = hg.v_exit_[k] = v;
        continue;
      }
      const Rat cap = Rat(1) / Rat(r);
      const std::string g = "g" + rc(r, c) + "/";
      const NodeId x1 = node(g + "x1", r, c);
      const NodeId x2 = node(g + "x2", r, c);
      if (gadget == Gadget::Yes) {
        const NodeId y1 = node(g + "y1", r, c);
        const NodeId y2 = node(g + "y2", r, c);
        hg.internal_h[k] = spec.add_edge(x1, y1, cap, 1);
        hg.internal_v[k] = spec.add_edge(x2, y2, cap, 1);
        hg.h_exit_[k] = y1;
        hg.v_exit_[k] = y2;
      } else {
        const NodeId m = node(g + "m", r, c);
        const NodeId y1 = node(g + "y1", r, c);
        const NodeId y2 = node(g + "y2", r, c);
        spec.add_edge(x1, m, cap, 1);
        spec.add_edge(x2, m, cap, 1);
        spec.add_edge(m, y1, cap, 1);
        spec.add_edge(m, y2, cap, 1);
        hg.h_exit_[k] = y1;
        hg.v_exit_[k] = y2;
      }
      hg.h_port_[k] = x1;
      hg.v_port_[k] = x2;
    }
  }
  for (int c = 1; c <= N; ++c) hg.tc[c] = node("t" + std::to_string(c), 0, 0);
  hg.t = node("t", 0, 0);
  spec.sinks = {hg.t};
  for (int r = 1; r <= N; ++r) {
    const Rat cap = Rat(1) / Rat(r);
    hg.h_in_[hg.idx(r, N)] = spec.add_edge(hg.s[r], hg.h_port(r, N), cap, 1);
    for (int c = N - 1; c >= r; --c) {
      hg.h_in_[hg.idx(r, c)] = spec.add_edge(hg.h_exit(r, c + 1), hg.h_port(r, c), cap, 1);
    }
  }
  for (int c = 1; c <= N; ++c) {
    const Rat cap = Rat(1) / Rat(c);
    for (int r = c - 1; r >= 1; --r) {
      hg.v_in_[hg.idx(r, c)] = spec.add_edge(hg.v_exit(r + 1, c), hg.v_port(r, c), cap, 1);
    }
    hg.down_[c] = spec.add_edge(hg.v_exit(1, c), hg.tc[c], cap, 1);
    hg.root_edge[c] = spec.add_edge(hg.tc[c], hg.t, cap, 1);
  }
  hg.net = Network(std::move(spec));
  return hg;
}

namespace {

// Arcs of the i-th canonical path.
std::vector<ArcId> canonical_arcs(const HalfGrid& hg, int i) {
  std::vector<ArcId> arcs;
  const int N = hg.N;
  for (int c = N; c >= i; --c) {
    arcs.push_back(2 * hg.h_in(i, c));
    if (c > i && hg.internal_h[hg.idx(i, c)] != kNone) arcs.push_back(2 * hg.internal_h[hg.idx(i, c)]);
  }
  for (int r = i - 1; r >= 1; --r) {
    arcs.push_back(2 * hg.v_in(r, i));
    if (hg.internal_v[hg.idx(r, i)] != kNone) arcs.push_back(2 * hg.internal_v[hg.idx(r, i)]);
  }
  arcs.push_back(2 * hg.down(i));
  arcs.push_back(2 * hg.root_edge[i]);
  return arcs;
}

}  // namespace

PathFlow canonical_paths(const HalfGrid& hg) {
  PathFlow f;
  for (int i = 1; i <= hg.N; ++i) {
    f.paths.push_back({Path{hg.s[i], canonical_arcs(hg, i)}, hg.net.supply(hg.s[i])});
  }
  return f;
}

ConfluentRouting canonical_routing(const HalfGrid& hg) {
  if (hg.gadget == Gadget::No) {
    throw PreconditionViolated("canonical paths are blocked by the No gadget");
  }
  ConfluentRouting r = empty_routing(hg.net);
  for (int i = 1; i <= hg.N; ++i) {
    for (ArcId a : canonical_arcs(hg, i)) {
      const NodeId u = hg.net.tail(a);
      if (r.out_arc[u] != kNone && r.out_arc[u] != a) {
        throw PreconditionViolated("canonical paths cross at " + hg.net.name(u) +
                                   " without a gadget; use canonical_paths");
      }
      r.out_arc[u] = a;
    }
  }
  return r;
}

int path_root(const HalfGrid& hg, const Path& p) {
  for (ArcId a : p.arcs) {
    const NodeId v = hg.net.head(a);
    for (int c = 1; c <= hg.N; ++c) {
      if (hg.tc[c] == v) return c;
    }
  }
  return 0;
}

namespace {

enum Dir { kH, kV };

struct Visit {
  std::size_t path;
  Dir in;
  Dir out;
};

std::map<NodeId, std::vector<Visit>> visits(const HalfGrid& hg, const TreeFamily& fam) {
  std::vector<int> hdir(hg.net.m(), kV);
  for (int r = 1; r <= hg.N; ++r) {
    for (int c = r; c <= hg.N; ++c) hdir[hg.h_in(r, c)] = kH;
  }
  std::map<NodeId, std::vector<Visit>> out;
  for (std::size_t i = 0; i < fam.paths.size(); ++i) {
    const auto& arcs = fam.paths[i].arcs;
    for (std::size_t k = 0; k + 1 < arcs.size(); ++k) {
      const NodeId v = hg.net.head(arcs[k]);
      if (hg.row[v] == 0) continue;
      out[v].push_back({i, static_cast<Dir>(hdir[arcs[k] / 2]), static_cast<Dir>(hdir[arcs[k + 1] / 2])});
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> check_family(const HalfGrid& hg, const TreeFamily& fam) {
  std::vector<std::string> bad;
  if (hg.gadget != Gadget::None) bad.push_back("tree families live on the plain grid");
  std::set<NodeId> starts;
  std::map<ArcId, std::pair<std::size_t, std::size_t>> first_use;  // arc -> (path, position)
  for (std::size_t i = 0; i < fam.paths.size(); ++i) {
    const Path& p = fam.paths[i];
    for (const Violation& v : check_path(hg.net, p)) bad.push_back("path " + std::to_string(i) + ": " + v.message);
    if (!starts.insert(p.start).second) bad.push_back("path " + std::to_string(i) + ": source used twice");
    if (path_root(hg, p) == 0) bad.push_back("path " + std::to_string(i) + ": no t_c on the path");
  }
  if (!bad.empty()) return bad;
  for (std::size_t i = 0; i < fam.paths.size(); ++i) {
    const auto& arcs = fam.paths[i].arcs;
    for (std::size_t k = 0; k < arcs.size(); ++k) {
      auto [it, fresh] = first_use.try_emplace(arcs[k], i, k);
      if (fresh) continue;
      const auto& other = fam.paths[it->second.first].arcs;
      const std::size_t ok = it->second.second;
      const bool same = other.size() - ok == arcs.size() - k &&
                        std::equal(arcs.begin() + k, arcs.end(), other.begin() + ok);
      if (!same) {
        bad.push_back("paths " + std::to_string(it->second.first) + " and " + std::to_string(i) +
                      " share " + hg.net.name(hg.net.tail(arcs[k])) + "->" +
                      hg.net.name(hg.net.head(arcs[k])) + " but split later");
      }
    }
  }
  return bad;
}

std::optional<Crossing> find_crossing(const HalfGrid& hg, const TreeFamily& fam) {
  for (const auto& [v, list] : visits(hg, fam)) {
    for (const Visit& a : list) {
      if (a.in != kV || a.out != kV) continue;
      for (const Visit& b : list) {
        if (b.in != kH || b.out != kH) continue;
        if (path_root(hg, fam.paths[a.path]) == path_root(hg, fam.paths[b.path])) continue;
        return Crossing{hg.row[v], hg.col[v], a.path, b.path};
      }
    }
  }
  return std::nullopt;
}

TreeFamily canonical_family(const HalfGrid& hg) {
  TreeFamily fam;
  for (int i = 1; i <= hg.N; ++i) fam.paths.push_back({hg.s[i], canonical_arcs(hg, i)});
  return fam;
}

TreeFamily random_family(const HalfGrid& hg, std::uint64_t seed, bool allow_crossing) {
  if (hg.gadget != Gadget::None) throw PreconditionViolated("tree families live on the plain grid");
  std::mt19937_64 rng(seed);
  const int N = hg.N;
  // 0: leave horizontally, 1: leave vertically, 2: turn, 3: straight.
  std::vector<int> mode(static_cast<std::size_t>(N + 1) * (N + 1), 1);
  const int modes = allow_crossing ? 4 : 3;
  for (int c = 1; c <= N; ++c) {
    for (int r = 1; r < c; ++r) mode[hg.idx(r, c)] = static_cast<int>(rng() % modes);
  }
  std::vector<int> rows;
  for (int r = 1; r <= N; ++r) {
    if (rng() % 10 < 7) rows.push_back(r);
  }
  if (rows.empty()) rows.push_back(static_cast<int>(rng() % N) + 1);
  TreeFamily fam;
  for (int i : rows) {
    Path p{hg.s[i], {2 * hg.h_in(i, N)}};
    int r = i, c = N;
    Dir in = kH;
    while (true) {
      Dir out;
      if (r == c) {
        out = kV;
      } else {
        const int m = mode[hg.idx(r, c)];
        out = m == 0 ? kH : m == 1 ? kV : m == 2 ? (in == kH ? kV : kH) : in;
      }
      if (out == kH) {
        p.arcs.push_back(2 * hg.h_in(r, c - 1));
        --c;
      } else if (r > 1) {
        p.arcs.push_back(2 * hg.v_in(r - 1, c));
        --r;
      } else {
        p.arcs.push_back(2 * hg.down(c));
        p.arcs.push_back(2 * hg.root_edge[c]);
        break;
      }
      in = out;
    }
    fam.paths.push_back(std::move(p));
  }
  return fam;
}

CutResult build_cut(const HalfGrid& hg, const TreeFamily& fam) {
  const auto bad = check_family(hg, fam);
  if (!bad.empty()) throw PreconditionViolated(bad.front());
  if (auto x = find_crossing(hg, fam)) {
    throw PreconditionViolated("trees cross at grid node (" + std::to_string(x->row) + ", " +
                     std::to_string(x->col) + "): path " + std::to_string(x->vertical) +
                     " passes vertically, path " + std::to_string(x->horizontal) +
                     " horizontally");
  }
  const Network& net = hg.net;
  const std::size_t P = fam.paths.size();
  std::vector<int> root(P);
  std::vector<std::vector<NodeId>> nodes(P);
  for (std::size_t i = 0; i < P; ++i) {
    root[i] = path_root(hg, fam.paths[i]);
    nodes[i] = fam.paths[i].nodes(net);
  }
  auto visits_sub = [&](std::size_t i, int r, int l) {
    for (NodeId v : nodes[i]) {
      const int a = hg.row[v], b = hg.col[v];
      if (a >= r && a <= l && b >= r && b <= l) return true;
    }
    return false;
  };
  CutResult res;
  std::set<EdgeId> cut;
  std::vector<bool> open(P, true);
  int r = 1, l = hg.N;
  while (r <= l) {
    int n = 0;
    for (std::size_t i = 0; i < P; ++i) {
      if (open[i] && visits_sub(i, r, l)) n = std::max(n, root[i]);
    }
    if (n == 0) break;
    ++res.iterations;
    res.subgrids.push_back({r, l, n});
    cut.insert(hg.root_edge[n]);
    int top = 1;
    for (std::size_t i = 0; i < P; ++i) {
      if (!open[i] || root[i] != n) continue;
      open[i] = false;
      for (NodeId v : nodes[i]) {
        if (hg.col[v] == n) top = std::max(top, hg.row[v]);
      }
    }
    const int r2 = top + 1, l2 = n - 1;
    // Open paths that miss the next subgrid, grouped by tree.
    std::map<int, std::vector<std::size_t>> avoid;
    for (std::size_t i = 0; i < P; ++i) {
      if (open[i] && !visits_sub(i, r2, l2)) avoid[root[i]].push_back(i);
    }
    for (const auto& [rt, group] : avoid) {
      std::set<EdgeId> common;
      bool first = true;
      for (std::size_t i : group) {
        std::set<EdgeId> mine;
        for (ArcId a : fam.paths[i].arcs) mine.insert(a / 2);
        if (first) {
          common = std::move(mine);
          first = false;
        } else {
          std::set<EdgeId> keep;
          std::set_intersection(common.begin(), common.end(), mine.begin(), mine.end(),
                                std::inserter(keep, keep.end()));
          common = std::move(keep);
        }
      }
      EdgeId pick = kNone;
      for (int x = 1; x < n; ++x) {
        if (common.count(hg.v_in(x, n))) {
          pick = hg.v_in(x, n);
          break;
        }
      }
      if (pick == kNone) {
        ++res.fallbacks;
        for (EdgeId e : common) {
          if (pick == kNone || net.edge(e).cap < net.edge(pick).cap) pick = e;
        }
      }
      cut.insert(pick);
      for (std::size_t i : group) open[i] = false;
    }
    r = r2;
    l = l2;
  }
  for (std::size_t i = 0; i < P; ++i) {
    if (!open[i]) continue;
    ++res.fallbacks;
    cut.insert(hg.root_edge[root[i]]);
    for (std::size_t j = 0; j < P; ++j) {
      if (root[j] == root[i]) open[j] = false;
    }
  }
  res.edges.assign(cut.begin(), cut.end());
  for (EdgeId e : res.edges) res.weight += net.edge(e).cap;
  // Flow stays on its own tree, so reachability runs per tree over that
  // tree's arcs without the cut.
  std::map<int, std::vector<const Path*>> trees;
  for (const Path& p : fam.paths) trees[path_root(hg, p)].push_back(&p);
  res.separates = true;
  for (const auto& [root, paths] : trees) {
    std::vector<std::vector<NodeId>> adj(net.n());
    for (const Path* p : paths) {
      for (ArcId a : p->arcs) {
        if (!cut.count(a / 2)) adj[net.tail(a)].push_back(net.head(a));
      }
    }
    std::vector<bool> seen(net.n(), false);
    std::vector<NodeId> stack;
    for (const Path* p : paths) {
      seen[p->start] = true;
      stack.push_back(p->start);
    }
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    if (seen[hg.t]) res.separates = false;
  }
  return res;
}

GadgetInstance gen_alphabeta(const Int& alpha, const Int& M, bool yes) {
  if (alpha < 1 || M < 1) throw PreconditionViolated("alpha and M must be at least 1");
  GadgetInstance gi;
  gi.kind = yes ? "alphabeta-yes" : "alphabeta-no";
  gi.alpha = alpha;
  gi.M = M;
  const Rat a(alpha);
  const Rat b = Rat(2) * a;
  NetworkSpec spec;
  spec.directed = true;
  const NodeId s1 = spec.add_node("s1", Rat(M) * a);
  const NodeId s2 = spec.add_node("s2", Rat(M) * b);
  const NodeId x1 = spec.add_node("x1");
  const NodeId x2 = spec.add_node("x2");
  const NodeId y1 = spec.add_node("y1");
  const NodeId y2 = spec.add_node("y2");
  if (yes) {
    spec.add_edge(x1, y1, a, 1);
    spec.add_edge(x2, y2, b, 1);
    gi.p = 4;
  } else {
    const NodeId m = spec.add_node("m");
    spec.add_edge(x1, m, a, 1);
    spec.add_edge(x2, m, b, 1);
    spec.add_edge(m, y1, a, 1);
    spec.add_edge(m, y2, b, 1);
    gi.p = 5;
  }
  const NodeId t = spec.add_node("t");
  spec.sinks = {t};
  spec.add_edge(s1, x1, a, 1);
  spec.add_edge(s2, x2, b, 1);
  spec.add_edge(y1, t, a, 1);
  spec.add_edge(y2, t, b, 1);
  gi.net = Network(std::move(spec));
  return gi;
}

GadgetInstance gen_bo3dm(int n, const std::vector<std::array<int, 3>>& triples, int M,
                         bool confluent, const Rat& supply, bool directed) {
  if (n < 1 || M < 2) throw PreconditionViolated("BO3DM needs n >= 1 and M >= 2");
  std::array<std::vector<int>, 3> count;
  for (auto& c : count) c.assign(n, 0);
  for (std::size_t mu = 0; mu < triples.size(); ++mu) {
    for (int k = 0; k < 3; ++k) {
      const int e = triples[mu][k];
      if (e < 0 || e >= n) {
        throw PreconditionViolated("triple " + std::to_string(mu) + " names element " +
                                   std::to_string(e) + " outside [0, " + std::to_string(n) + ")");
      }
      ++count[k][e];
    }
  }
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < n; ++i) {
      if (count[k][i] != M) {
        throw PreconditionViolated(std::string(1, "abc"[k]) + std::to_string(i) + " occurs " +
                                   std::to_string(count[k][i]) + " times, expected " +
                                   std::to_string(M));
      }
    }
  }
  GadgetInstance gi;
  gi.kind = confluent ? "bo3dm-confluent" : "bo3dm";
  gi.M = M;
  gi.T = 14;
  const int m = static_cast<int>(triples.size());
  NetworkSpec spec;
  spec.directed = directed;
  const NodeId t = spec.add_node("t");
  spec.sinks = {t};
  std::vector<NodeId> si(n), b(n), c(n), sp(m), x(m), y(m);
  std::vector<std::vector<NodeId>> a(n);
  for (int i = 0; i < n; ++i) si[i] = spec.add_node("s" + std::to_string(i), supply);
  for (int mu = 0; mu < m; ++mu) sp[mu] = spec.add_node("sp" + std::to_string(mu), supply);
  NodeId hub = kNone;
  if (!confluent) hub = spec.add_node("s");
  for (int i = 0; i < n; ++i) {
    b[i] = spec.add_node("b" + std::to_string(i));
    c[i] = spec.add_node("c" + std::to_string(i));
    for (int l = 1; l < M; ++l) a[i].push_back(spec.add_node("a" + std::to_string(i) + "_" + std::to_string(l)));
  }
  for (int mu = 0; mu < m; ++mu) {
    x[mu] = spec.add_node("x" + std::to_string(mu));
    y[mu] = spec.add_node("y" + std::to_string(mu));
  }
  for (int i = 0; i < n; ++i) {
    if (confluent) {
      const NodeId h = spec.add_node("h_s" + std::to_string(i));
      spec.add_edge(si[i], h, 1, 2);
      spec.add_edge(h, b[i], 1, 2);
    } else {
      spec.add_edge(si[i], hub, 1, 2);
      spec.add_edge(hub, b[i], 1, 2);
    }
    spec.add_edge(c[i], t, 1, 2);
    for (NodeId ai : a[i]) spec.add_edge(ai, t, 1, 3);
  }
  for (int mu = 0; mu < m; ++mu) {
    if (confluent) {
      const NodeId h = spec.add_node("h_sp" + std::to_string(mu));
      spec.add_edge(sp[mu], h, 1, 2);
      spec.add_edge(h, x[mu], 1, 5);
    } else {
      spec.add_edge(sp[mu], hub, 1, 2);
      spec.add_edge(hub, x[mu], 1, 5);
    }
    const auto& tr = triples[mu];
    for (NodeId ai : a[tr[0]]) spec.add_edge(y[mu], ai, 1, 2);
    spec.add_edge(b[tr[1]], x[mu], 1, 2);
    spec.add_edge(x[mu], y[mu], 1, 2);
    spec.add_edge(y[mu], c[tr[2]], 1, 4);
  }
  gi.net = Network(std::move(spec));
  return gi;
}

std::vector<Network> gen_random_corpus(const CorpusSpec& spec, std::uint64_t seed) {
  if (spec.n_min < 2 || spec.n_max < spec.n_min) throw PreconditionViolated("corpus needs 2 <= n_min <= n_max");
  if (spec.kappa_min < 0 || spec.kappa_max < spec.kappa_min) throw PreconditionViolated("bad kappa range");
  if (spec.cap_min < 1 || spec.cap_max < spec.cap_min) throw PreconditionViolated("bad capacity range");
  if (spec.len_min < 0 || spec.len_max < spec.len_min) throw PreconditionViolated("bad length range");
  if (spec.supply_min < 1 || spec.supply_max < spec.supply_min) throw PreconditionViolated("bad supply range");
  if (spec.monotone && (!spec.dag || !spec.directed)) {
    throw PreconditionViolated("monotone corpora must be directed DAGs");
  }
  std::vector<int> caps;
  for (int c = spec.cap_min; c <= spec.cap_max; ++c) {
    if (!spec.pow2_caps || (c & (c - 1)) == 0) caps.push_back(c);
  }
  if (caps.empty()) throw PreconditionViolated("no capacity in range");
  std::mt19937_64 rng(seed);
  auto uni = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  std::vector<Network> out;
  for (int k = 0; k < spec.count; ++k) {
    const int n = uni(spec.n_min, spec.n_max);
    NetworkSpec ns;
    ns.directed = spec.directed;
    for (int v = 0; v + 1 < n; ++v) ns.add_node("v" + std::to_string(v));
    const NodeId t = ns.add_node("t");
    ns.sinks = {t};
    std::set<std::pair<int, int>> have;
    auto edge = [&](int u, int v) {
      if (u == v || u == t) return;
      const auto key = spec.directed ? std::make_pair(u, v) : std::make_pair(std::min(u, v), std::max(u, v));
      if (!have.insert(key).second) return;
      ns.add_edge(u, v, caps[rng() % caps.size()], uni(spec.len_min, spec.len_max));
    };
    for (int v = 0; v + 1 < n; ++v) edge(v, uni(v + 1, n - 1));
    const int extra = static_cast<int>(spec.extra_edges * n + 0.5);
    for (int e = 0; e < extra; ++e) {
      int u = uni(0, n - 2), v = uni(0, n - 1);
      if (spec.dag) {
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (u == t) continue;
      }
      edge(u, v);
    }
    const int kappa = std::min(uni(spec.kappa_min, spec.kappa_max), n - 1);
    std::vector<int> cand(n - 1);
    for (int v = 0; v + 1 < n; ++v) cand[v] = v;
    for (int i = 0; i < kappa; ++i) {
      const int j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(cand.size() - i));
      std::swap(cand[i], cand[j]);
      ns.supply[cand[i]] = uni(spec.supply_min, spec.supply_max);
    }
    if (spec.monotone) {
      std::vector<int> nc(n);
      for (int& c : nc) c = caps[rng() % caps.size()];
      std::sort(nc.begin(), nc.end());
      ns.node_caps = std::vector<Rat>(nc.begin(), nc.end());
      ns.monotone = true;
    }
    Network net(std::move(ns));
    const auto bad = validate(net);
    if (!bad.empty()) throw Error("generated network invalid: " + bad.front().message);
    out.push_back(std::move(net));
  }
  return out;
}

RoundingInstance gen_rounding_instance(int layers, int width, int kappa, int nc_target,
                                       std::uint64_t seed) {
  if (layers < 2 || width < 1 || kappa < 1 || nc_target < 1) {
    throw PreconditionViolated("rounding instance needs layers >= 2, width, kappa, nc >= 1");
  }
  if (kappa > (layers - 1) * width) throw PreconditionViolated("more sources than non-sink nodes");
  std::mt19937_64 rng(seed);
  NetworkSpec spec;
  spec.directed = true;
  auto id = [width](int l, int i) { return l * width + i; };
  for (int l = 0; l < layers; ++l) {
    for (int i = 0; i < width; ++i) spec.add_node("n" + std::to_string(l) + "_" + std::to_string(i));
  }
  for (int i = 0; i < width; ++i) spec.sinks.push_back(id(layers - 1, i));
  for (int l = 0; l + 1 < layers; ++l) {
    for (int i = 0; i < width; ++i) {
      const int deg = std::min(width, 2 + static_cast<int>(rng() % 2));
      std::set<int> heads;
      while (static_cast<int>(heads.size()) < deg) heads.insert(static_cast<int>(rng() % width));
      for (int j : heads) spec.add_edge(id(l, i), id(l + 1, j), 1, 1);
    }
  }
  std::vector<int> cand((layers - 1) * width);
  for (std::size_t v = 0; v < cand.size(); ++v) cand[v] = static_cast<int>(v);
  std::shuffle(cand.begin(), cand.end(), rng);
  Network shape(spec);
  std::vector<Rat> load(shape.n(), Rat(0));
  const Rat cap(nc_target);
  const Rat half(Int(1), Int(2));
  PathFlow flow;
  auto walk = [&](NodeId s, const Rat& amount) -> std::optional<Path> {
    for (int attempt = 0; attempt < 30; ++attempt) {
      Path p{s, {}};
      NodeId v = s;
      bool ok = true;
      while (!shape.is_sink(v)) {
        std::vector<ArcId> options;
        for (ArcId a : shape.out_arcs(v)) {
          const NodeId w = shape.head(a);
          if (shape.is_sink(w) || load[w] + amount <= cap) options.push_back(a);
        }
        if (options.empty()) {
          ok = false;
          break;
        }
        const ArcId a = options[rng() % options.size()];
        p.arcs.push_back(a);
        v = shape.head(a);
      }
      if (ok) return p;
    }
    return std::nullopt;
  };
  std::vector<NodeId> kept;
  // Candidates are tried in shuffled order until kappa sources fit.
  for (NodeId s : cand) {
    if (static_cast<int>(kept.size()) == kappa) break;
    if (load[s] + Rat(1) > cap) continue;
    std::vector<std::pair<Path, Rat>> parts;
    load[s] += 1;
    bool ok = true;
    for (int h = 0; h < 2 && ok; ++h) {
      auto p = walk(s, half);
      if (!p) {
        ok = false;
        break;
      }
      for (ArcId a : p->arcs) {
        const NodeId w = shape.head(a);
        if (!shape.is_sink(w)) load[w] += half;
      }
      parts.push_back({std::move(*p), half});
    }
    if (!ok) {
      load[s] -= 1;
      for (auto& [p, v] : parts) {
        for (ArcId a : p.arcs) {
          const NodeId w = shape.head(a);
          if (!shape.is_sink(w)) load[w] -= v;
        }
      }
      continue;
    }
    kept.push_back(s);
    for (auto& [p, v] : parts) flow.paths.push_back({std::move(p), v});
  }
  std::sort(kept.begin(), kept.end());
  std::stable_sort(flow.paths.begin(), flow.paths.end(),
            [](const FlowPath& a, const FlowPath& b) { return a.path.start < b.path.start; });
  for (NodeId s : kept) spec.supply[s] = 1;
  RoundingInstance ri{Network(std::move(spec)), std::move(flow), 0};
  ri.nc = node_congestion(ri.net, flow_stats(ri.net, ri.flow).node_out);
  return ri;
}

}  // namespace confluent
