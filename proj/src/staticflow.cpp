#include "confluent/staticflow.hpp"

#include "internal.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <tuple>

namespace confluent {

namespace {

// Dinic on integer capacities. Edge i and i^1 are residual partners.
class Dinic {
 public:
  explicit Dinic(int n) : adj_(n), level_(n), it_(n) {}

  int add(int u, int v, const Int& cap, const Int& back) {
    const int id = static_cast<int>(to_.size());
    to_.push_back(v);
    res_.push_back(cap);
    adj_[u].push_back(id);
    to_.push_back(u);
    res_.push_back(back);
    adj_[v].push_back(id + 1);
    return id;
  }

  Int run(int s, int t) {
    Int total = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (true) {
        Int pushed = dfs(s, t, Int(-1));
        if (pushed == 0) break;
        total += pushed;
      }
    }
    return total;
  }

  const Int& residual(int id) const { return res_[id]; }

 private:
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int id : adj_[u]) {
        if (res_[id] > 0 && level_[to_[id]] < 0) {
          level_[to_[id]] = level_[u] + 1;
          q.push(to_[id]);
        }
      }
    }
    return level_[t] >= 0;
  }

  // limit < 0 means unbounded.
  Int dfs(int u, int t, const Int& limit) {
    if (u == t) return limit;
    for (std::size_t& i = it_[u]; i < adj_[u].size(); ++i) {
      const int id = adj_[u][i];
      const int v = to_[id];
      if (res_[id] <= 0 || level_[v] != level_[u] + 1) continue;
      const Int lim = limit < 0 ? res_[id] : (res_[id] < limit ? res_[id] : limit);
      Int got = dfs(v, t, lim);
      if (got > 0) {
        res_[id] -= got;
        res_[id ^ 1] += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<int> to_;
  std::vector<Int> res_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

// Removes every cycle from the positive support of arc_flow.
void cancel_support_cycles(const Network& net, std::vector<Rat>& flow) {
  const int n = net.n();
  while (true) {
    std::vector<int> color(n, 0);
    std::vector<ArcId> via(n, kNone);
    std::vector<ArcId> cycle;
    for (NodeId root = 0; root < n && cycle.empty(); ++root) {
      if (color[root] != 0) continue;
      std::vector<std::pair<NodeId, std::size_t>> stack{{root, 0}};
      color[root] = 1;
      while (!stack.empty() && cycle.empty()) {
        auto& [u, i] = stack.back();
        const auto& outs = net.out_arcs(u);
        if (i == outs.size()) {
          color[u] = 2;
          stack.pop_back();
          continue;
        }
        const ArcId a = outs[i++];
        if (flow[a].sign() <= 0) continue;
        const NodeId v = net.head(a);
        if (color[v] == 0) {
          color[v] = 1;
          via[v] = a;
          stack.push_back({v, 0});
        } else if (color[v] == 1) {
          cycle.push_back(a);
          for (NodeId w = u; w != v; w = net.tail(via[w])) cycle.push_back(via[w]);
        }
      }
    }
    if (cycle.empty()) return;
    Rat low = flow[cycle.front()];
    for (ArcId a : cycle) low = min(low, flow[a]);
    for (ArcId a : cycle) flow[a] -= low;
  }
}

PathFlow peel_paths(const Network& net, std::vector<Rat> flow) {
  const int n = net.n();
  std::vector<Rat> excess(n, Rat(0));
  for (ArcId a = 0; a < net.num_arcs(); ++a) {
    if (flow[a].is_zero()) continue;
    if (flow[a].sign() < 0) throw PreconditionViolated("negative arc flow");
    if (!net.arc_exists(a)) throw PathError("flow on a nonexistent arc");
    excess[net.tail(a)] += flow[a];
    excess[net.head(a)] -= flow[a];
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!net.is_sink(v) && excess[v].sign() < 0) {
      throw PreconditionViolated("flow conservation violated at " + net.name(v));
    }
  }
  cancel_support_cycles(net, flow);
  PathFlow out;
  for (NodeId s = 0; s < n; ++s) {
    while (!net.is_sink(s) && excess[s].sign() > 0) {
      Path p;
      p.start = s;
      NodeId at = s;
      Rat low = excess[s];
      while (!net.is_sink(at)) {
        ArcId next = kNone;
        for (ArcId a : net.out_arcs(at)) {
          if (flow[a].sign() > 0) {
            next = a;
            break;
          }
        }
        if (next == kNone) throw PreconditionViolated("flow conservation violated at " + net.name(at));
        p.arcs.push_back(next);
        low = min(low, flow[next]);
        at = net.head(next);
      }
      for (ArcId a : p.arcs) flow[a] -= low;
      excess[s] -= low;
      out.paths.push_back({std::move(p), low});
    }
  }
  return out;
}

std::vector<Rat> arc_flow_of(const Network& net, const PathFlow& f) {
  std::vector<Rat> flow(net.num_arcs(), Rat(0));
  for (const FlowPath& fp : f.paths) {
    for (ArcId a : fp.path.arcs) flow[a] += fp.value;
  }
  return flow;
}

// Maximise the total path flow subject to edge capacities and per-source
// caps, over paths of length <= budget. Revised simplex on exact rationals
// with column generation; edge rows are created when a column first uses
// the edge.
class PathLp {
 public:
  PathLp(const Network& net, const std::vector<Rat>& caps, NodeId sink, std::int64_t budget)
      : net_(net), sink_(sink), budget_(budget), edge_row_(net.m(), -1), src_row_(net.n(), -1) {
    for (NodeId v = 0; v < net.n(); ++v) {
      if (v < static_cast<NodeId>(caps.size()) && caps[v].sign() > 0 && !net.is_sink(v)) {
        src_row_[v] = add_row(caps[v]);
      }
    }
  }

  PathFlow solve() {
    const std::int64_t limit = 200000;
    for (std::int64_t iter = 0;; ++iter) {
      if (iter > limit) throw GuardExceeded("length-bounded LP exceeded its pivot limit");
      compute_duals();
      int enter = -1;
      for (int j = 0; j < static_cast<int>(vars_.size()) && enter < 0; ++j) {
        if (!basic_[j] && reduced_cost(j).sign() > 0) enter = j;
      }
      if (enter < 0) enter = price();
      if (enter < 0) break;
      pivot(enter);
    }
    PathFlow out;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      const Var& var = vars_[basis_[i]];
      if (var.slack_row < 0 && xb_[i].sign() > 0) out.paths.push_back({var.path, xb_[i]});
    }
    std::sort(out.paths.begin(), out.paths.end(), [](const FlowPath& a, const FlowPath& b) {
      return std::tie(a.path.start, a.path.arcs) < std::tie(b.path.start, b.path.arcs);
    });
    return out;
  }

 private:
  struct Var {
    int slack_row = -1;
    Path path;
    std::vector<std::pair<int, int>> col;  // (row, coefficient)
  };

  int add_row(const Rat& rhs) {
    const int r = static_cast<int>(basis_.size());
    for (auto& row : binv_) row.push_back(Rat(0));
    binv_.emplace_back(r + 1, Rat(0));
    binv_[r][r] = 1;
    Var s;
    s.slack_row = r;
    s.col = {{r, 1}};
    vars_.push_back(std::move(s));
    basic_.push_back(true);
    basis_.push_back(static_cast<int>(vars_.size()) - 1);
    xb_.push_back(rhs);
    return r;
  }

  void compute_duals() {
    const int rows = static_cast<int>(basis_.size());
    y_.assign(rows, Rat(0));
    for (int i = 0; i < rows; ++i) {
      if (vars_[basis_[i]].slack_row >= 0) continue;
      for (int j = 0; j < rows; ++j) {
        if (!binv_[i][j].is_zero()) y_[j] += binv_[i][j];
      }
    }
  }

  Rat reduced_cost(int j) const {
    const Var& v = vars_[j];
    Rat rc = v.slack_row >= 0 ? Rat(0) : Rat(1);
    for (auto [r, c] : v.col) rc -= y_[r] * Rat(c);
    return rc;
  }

  Rat edge_cost(EdgeId e) const { return edge_row_[e] < 0 ? Rat(0) : y_[edge_row_[e]]; }

  // Pareto labels (length, cost) from every node to the sink, built backward.
  int price() {
    struct Label {
      NodeId v;
      std::int64_t len;
      Rat cost;
      int parent;
      ArcId arc;
    };
    std::vector<Label> labels;
    std::vector<int> best(net_.n(), -1);  // cheapest final label per node
    using Item = std::tuple<std::int64_t, Rat, int>;
    auto cmp = [](const Item& a, const Item& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
      if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) > std::get<1>(b);
      return std::get<2>(a) > std::get<2>(b);
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
    labels.push_back({sink_, 0, Rat(0), -1, kNone});
    pq.push({0, Rat(0), 0});
    while (!pq.empty()) {
      auto [len, cost, id] = pq.top();
      pq.pop();
      const NodeId v = labels[id].v;
      if (best[v] >= 0 && labels[best[v]].cost <= cost) continue;
      best[v] = id;
      for (ArcId a : net_.in_arcs(v)) {
        const NodeId u = net_.tail(a);
        if (net_.is_sink(u)) continue;
        const std::int64_t nl = len + net_.arc_len(a);
        if (nl > budget_) continue;
        Rat nc = cost + edge_cost(net_.arc_edge(a));
        if (best[u] >= 0 && labels[best[u]].cost <= nc) continue;
        labels.push_back({u, nl, nc, id, a});
        pq.push({nl, std::move(nc), static_cast<int>(labels.size()) - 1});
      }
    }
    int pick = -1;
    Rat pick_rc = 0;
    for (NodeId s = 0; s < net_.n(); ++s) {
      if (src_row_[s] < 0 || best[s] < 0) continue;
      Rat rc = Rat(1) - labels[best[s]].cost - y_[src_row_[s]];
      if (rc > pick_rc) {
        pick_rc = rc;
        pick = s;
      }
    }
    if (pick < 0) return -1;
    Var var;
    var.path.start = pick;
    for (int id = best[pick]; labels[id].parent >= 0; id = labels[id].parent) {
      var.path.arcs.push_back(labels[id].arc);
    }
    std::vector<int> count(net_.m(), 0);
    for (ArcId a : var.path.arcs) {
      const EdgeId e = net_.arc_edge(a);
      if (edge_row_[e] < 0) {
        edge_row_[e] = add_row(net_.edge(e).cap);
        y_.push_back(Rat(0));
      }
      ++count[e];
    }
    for (EdgeId e = 0; e < net_.m(); ++e) {
      if (count[e] > 0) var.col.push_back({edge_row_[e], count[e]});
    }
    var.col.push_back({src_row_[pick], 1});
    vars_.push_back(std::move(var));
    basic_.push_back(false);
    return static_cast<int>(vars_.size()) - 1;
  }

  void pivot(int enter) {
    const int rows = static_cast<int>(basis_.size());
    std::vector<Rat> d(rows, Rat(0));
    for (int i = 0; i < rows; ++i) {
      for (auto [r, c] : vars_[enter].col) {
        if (!binv_[i][r].is_zero()) d[i] += binv_[i][r] * Rat(c);
      }
    }
    int leave = -1;
    Rat best_ratio;
    for (int i = 0; i < rows; ++i) {
      if (d[i].sign() <= 0) continue;
      Rat ratio = xb_[i] / d[i];
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis_[i] < basis_[leave])) {
        leave = i;
        best_ratio = std::move(ratio);
      }
    }
    if (leave < 0) throw Error("length-bounded LP is unbounded");
    const Rat piv = d[leave];
    for (int j = 0; j < rows; ++j) {
      if (!binv_[leave][j].is_zero()) binv_[leave][j] /= piv;
    }
    xb_[leave] /= piv;
    for (int i = 0; i < rows; ++i) {
      if (i == leave || d[i].is_zero()) continue;
      const Rat factor = d[i];
      for (int j = 0; j < rows; ++j) {
        if (!binv_[leave][j].is_zero()) binv_[i][j] -= factor * binv_[leave][j];
      }
      xb_[i] -= factor * xb_[leave];
    }
    basic_[basis_[leave]] = false;
    basis_[leave] = enter;
    basic_[enter] = true;
  }

  const Network& net_;
  NodeId sink_;
  std::int64_t budget_;
  std::vector<int> edge_row_;
  std::vector<int> src_row_;
  std::vector<Var> vars_;
  std::vector<bool> basic_;
  std::vector<int> basis_;
  std::vector<Rat> xb_;
  std::vector<std::vector<Rat>> binv_;
  std::vector<Rat> y_;
};

}  // namespace

PathFlow max_flow(const Network& net, const std::vector<Rat>& caps, NodeId sink) {
  Int scale = 1;
  for (EdgeId e = 0; e < net.m(); ++e) scale = lcm(scale, net.edge(e).cap.den());
  for (NodeId v = 0; v < net.n() && v < static_cast<NodeId>(caps.size()); ++v) {
    if (caps[v].sign() > 0) scale = lcm(scale, caps[v].den());
  }
  auto scaled = [&scale](const Rat& r) { return (r * Rat(scale)).num(); };
  const int super = net.n();
  Dinic dinic(net.n() + 1);
  std::vector<int> handle(net.m(), -1);
  for (EdgeId e = 0; e < net.m(); ++e) {
    const Edge& ed = net.edge(e);
    const Int c = scaled(ed.cap);
    const Int fwd = net.is_sink(ed.u) ? Int(0) : c;
    const Int back = (net.directed() || net.is_sink(ed.v)) ? Int(0) : c;
    handle[e] = dinic.add(ed.u, ed.v, fwd, back);
  }
  bool any = false;
  for (NodeId v = 0; v < net.n() && v < static_cast<NodeId>(caps.size()); ++v) {
    if (caps[v].sign() > 0 && !net.is_sink(v)) {
      dinic.add(super, v, scaled(caps[v]), 0);
      any = true;
    }
  }
  if (!any) return {};
  dinic.run(super, sink);
  std::vector<Rat> flow(net.num_arcs(), Rat(0));
  for (EdgeId e = 0; e < net.m(); ++e) {
    const Edge& ed = net.edge(e);
    const Int cap = net.is_sink(ed.u) ? Int(0) : scaled(ed.cap);
    const Int f = cap - dinic.residual(handle[e]);
    if (f > 0) flow[2 * e] = Rat(f, scale);
    if (f < 0) flow[2 * e + 1] = Rat(-f, scale);
  }
  // Flow into a sink other than `sink` cannot happen: such sinks have no
  // residual path onward and the super source only reaches `sink`.
  return peel_paths(net, std::move(flow));
}

Rat max_flow_value(const Network& net, const std::vector<Rat>& caps, NodeId sink) {
  return max_flow(net, caps, sink).value();
}

PathFlow length_bounded_max_flow(const Network& net, const std::vector<Rat>& caps, NodeId sink,
                                 std::int64_t budget) {
  if (budget < 0) return {};
  if (budget >= net.total_length()) return max_flow(net, caps, sink);
  PathLp lp(net, caps, sink, budget);
  return lp.solve();
}

std::optional<PathFlow> length_bounded_flow(const Network& net, const std::vector<Rat>& demands,
                                            NodeId sink, std::int64_t budget) {
  Rat want = 0;
  for (NodeId v = 0; v < net.n() && v < static_cast<NodeId>(demands.size()); ++v) {
    if (demands[v].sign() > 0 && !net.is_sink(v)) want += demands[v];
  }
  if (want.is_zero()) return PathFlow{};
  PathFlow f = length_bounded_max_flow(net, demands, sink, budget);
  if (f.value() != want) return std::nullopt;
  return f;
}

PathFlow decompose(const Network& net, const std::vector<Rat>& arc_flow) {
  if (static_cast<int>(arc_flow.size()) != net.num_arcs()) {
    throw PreconditionViolated("arc flow has the wrong size");
  }
  return peel_paths(net, arc_flow);
}

PathFlow cancel_cycles(const Network& net, const PathFlow& f) {
  return peel_paths(net, arc_flow_of(net, f));
}

namespace {

struct Candidate {
  NodeId source;
  Rat demand;
  std::vector<Path> paths;
};

// Simple paths from s to the sink inside the positive support (a DAG).
std::vector<Path> support_paths(const Network& net, const std::vector<Rat>& flow, NodeId s,
                                NodeId sink, std::size_t cap) {
  std::vector<Path> out;
  Path cur;
  cur.start = s;
  auto rec = [&](auto&& self, NodeId at) -> void {
    if (out.size() >= cap) return;
    if (at == sink) {
      out.push_back(cur);
      return;
    }
    std::vector<ArcId> arcs;
    for (ArcId a : net.out_arcs(at)) {
      if (flow[a].sign() > 0) arcs.push_back(a);
    }
    std::stable_sort(arcs.begin(), arcs.end(), [&flow](ArcId a, ArcId b) { return flow[a] > flow[b]; });
    for (ArcId a : arcs) {
      cur.arcs.push_back(a);
      self(self, net.head(a));
      cur.arcs.pop_back();
    }
  };
  rec(rec, s);
  return out;
}

class UnsplitSearch {
 public:
  UnsplitSearch(const Network& net, std::vector<Candidate> cands, std::int64_t budget)
      : net_(net), cands_(std::move(cands)), budget_(budget), load_(net.m(), Rat(0)) {}

  // Greedy: each demand takes the path minimising the resulting max EC.
  std::vector<int> greedy() {
    std::vector<int> choice(cands_.size(), 0);
    std::fill(load_.begin(), load_.end(), Rat(0));
    for (std::size_t i = 0; i < cands_.size(); ++i) {
      int best = 0;
      Rat best_ec;
      for (std::size_t p = 0; p < cands_[i].paths.size(); ++p) {
        Rat ec = 0;
        for (ArcId a : cands_[i].paths[p].arcs) {
          const EdgeId e = net_.arc_edge(a);
          ec = max(ec, (load_[e] + cands_[i].demand) / net_.edge(e).cap);
        }
        if (p == 0 || ec < best_ec) {
          best = static_cast<int>(p);
          best_ec = ec;
        }
      }
      choice[i] = best;
      apply(i, best, cands_[i].demand);
    }
    improve(choice);
    return choice;
  }

  Rat max_ec(const std::vector<int>& choice) const {
    std::vector<Rat> load(net_.m(), Rat(0));
    for (std::size_t i = 0; i < cands_.size(); ++i) {
      for (ArcId a : cands_[i].paths[choice[i]].arcs) load[net_.arc_edge(a)] += cands_[i].demand;
    }
    Rat ec = 0;
    for (EdgeId e = 0; e < net_.m(); ++e) ec = max(ec, load[e] / net_.edge(e).cap);
    return ec;
  }

  // Depth-first search for an assignment with every load <= 2c.
  std::optional<std::vector<int>> exact() {
    std::fill(load_.begin(), load_.end(), Rat(0));
    std::vector<int> choice(cands_.size(), 0);
    nodes_ = 0;
    if (dfs(0, choice)) return choice;
    return std::nullopt;
  }

 private:
  void apply(std::size_t i, int p, const Rat& amount) {
    for (ArcId a : cands_[i].paths[p].arcs) load_[net_.arc_edge(a)] += amount;
  }

  void improve(std::vector<int>& choice) {
    bool moved = true;
    int rounds = 0;
    while (moved && rounds++ < 50) {
      moved = false;
      const Rat current = max_ec(choice);
      for (std::size_t i = 0; i < cands_.size(); ++i) {
        for (std::size_t p = 0; p < cands_[i].paths.size(); ++p) {
          if (static_cast<int>(p) == choice[i]) continue;
          const int old = choice[i];
          choice[i] = static_cast<int>(p);
          if (max_ec(choice) < current) {
            moved = true;
            break;
          }
          choice[i] = old;
        }
        if (moved) break;
      }
    }
  }

  bool dfs(std::size_t i, std::vector<int>& choice) {
    if (++nodes_ > budget_) throw GuardExceeded("unsplittable search exceeded its node budget");
    if (i == cands_.size()) return true;
    for (std::size_t p = 0; p < cands_[i].paths.size(); ++p) {
      bool ok = true;
      for (ArcId a : cands_[i].paths[p].arcs) {
        const EdgeId e = net_.arc_edge(a);
        if (load_[e] + cands_[i].demand > Rat(2) * net_.edge(e).cap) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      apply(i, static_cast<int>(p), cands_[i].demand);
      choice[i] = static_cast<int>(p);
      if (dfs(i + 1, choice)) return true;
      apply(i, static_cast<int>(p), -cands_[i].demand);
    }
    return false;
  }

  const Network& net_;
  std::vector<Candidate> cands_;
  std::int64_t budget_;
  std::int64_t nodes_ = 0;
  std::vector<Rat> load_;
};

}  // namespace

PathFlow unsplittable_flow(const Network& net, const std::vector<Rat>& demands, NodeId sink,
                           std::int64_t node_budget) {
  std::vector<NodeId> srcs;
  Rat want = 0;
  Rat dmax = 0;
  for (NodeId v = 0; v < net.n() && v < static_cast<NodeId>(demands.size()); ++v) {
    if (demands[v].sign() > 0 && !net.is_sink(v)) {
      srcs.push_back(v);
      want += demands[v];
      dmax = max(dmax, demands[v]);
    }
  }
  if (srcs.empty()) return {};
  if (dmax > net.c_min()) {
    throw PreconditionViolated("no-bottleneck assumption fails: demand " + dmax.str() +
                               " exceeds minimum capacity " + net.c_min().str());
  }
  PathFlow split = max_flow(net, demands, sink);
  if (split.value() != want) throw Infeasible("demands cannot be routed even fractionally");
  const std::vector<Rat> flow = arc_flow_of(net, split);
  std::vector<Candidate> cands;
  for (NodeId s : srcs) {
    Candidate c{s, demands[s], support_paths(net, flow, s, sink, 48)};
    for (const FlowPath& fp : split.paths) {
      if (fp.path.start == s &&
          std::find(c.paths.begin(), c.paths.end(), fp.path) == c.paths.end()) {
        c.paths.insert(c.paths.begin(), fp.path);
      }
    }
    cands.push_back(std::move(c));
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.demand > b.demand; });
  UnsplitSearch search(net, cands, node_budget);
  std::vector<int> choice = search.greedy();
  if (search.max_ec(choice) > Rat(2)) {
    auto exact = search.exact();
    if (!exact) throw GuardExceeded("no congestion-2 unsplittable flow among support paths");
    choice = *exact;
  }
  PathFlow out;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    out.paths.push_back({cands[i].paths[choice[i]], cands[i].demand});
  }
  std::sort(out.paths.begin(), out.paths.end(),
            [](const FlowPath& a, const FlowPath& b) { return a.path.start < b.path.start; });
  return out;
}

NodeSplit node_to_edge_capacitated(const Network& net) {
  if (!net.has_node_caps()) throw PreconditionViolated("network has no node capacities");
  NodeSplit ns;
  NetworkSpec spec;
  spec.directed = true;
  spec.node_caps = std::vector<Rat>{};
  ns.in.assign(net.n(), kNone);
  ns.out.assign(net.n(), kNone);
  ns.split_edge.assign(net.n(), kNone);
  for (NodeId v = 0; v < net.n(); ++v) {
    if (net.is_sink(v)) {
      ns.in[v] = ns.out[v] = spec.add_node(net.name(v));
      spec.node_caps->back() = net.node_cap(v);
    } else {
      ns.in[v] = spec.add_node(net.name(v) + "/in", net.supply(v));
      spec.node_caps->back() = net.node_cap(v);
      ns.out[v] = spec.add_node(net.name(v) + "/out");
      spec.node_caps->back() = net.node_cap(v);
    }
  }
  for (NodeId v = 0; v < net.n(); ++v) {
    if (net.is_sink(v)) continue;
    ns.split_edge[v] = spec.add_edge(ns.in[v], ns.out[v], net.node_cap(v), 0);
    ns.origin.push_back(kNone);
  }
  for (ArcId a = 0; a < net.num_arcs(); ++a) {
    if (!net.arc_exists(a)) continue;
    const NodeId u = net.tail(a);
    const NodeId v = net.head(a);
    if (net.is_sink(u)) continue;
    spec.add_edge(ns.out[u], ns.in[v], min(net.node_cap(u), net.node_cap(v)), net.arc_len(a));
    ns.origin.push_back(a);
  }
  for (NodeId t : net.sinks()) spec.sinks.push_back(ns.in[t]);
  ns.net = Network(std::move(spec));
  return ns;
}

PathFlow map_back(const Network& net, const NodeSplit& ns, const PathFlow& f) {
  std::vector<NodeId> orig(ns.net.n(), kNone);
  for (NodeId v = 0; v < net.n(); ++v) {
    orig[ns.in[v]] = v;
    orig[ns.out[v]] = v;
  }
  PathFlow out;
  for (const FlowPath& fp : f.paths) {
    Path p;
    p.start = orig[fp.path.start];
    for (ArcId a : fp.path.arcs) {
      const ArcId o = ns.origin[ns.net.arc_edge(a)];
      if (o != kNone) p.arcs.push_back(o);
    }
    out.paths.push_back({std::move(p), fp.value});
  }
  return out;
}

}  // namespace confluent

namespace confluent::detail {

std::vector<std::int64_t> distances_to(const Network& net, NodeId sink) {
  std::vector<std::int64_t> dist(net.n(), kUnreachable);
  using Item = std::pair<std::int64_t, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[sink] = 0;
  pq.push({0, sink});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != dist[v]) continue;
    for (ArcId a : net.in_arcs(v)) {
      const NodeId u = net.tail(a);
      if (net.is_sink(u)) continue;
      const std::int64_t nd = d + net.arc_len(a);
      if (nd < dist[u]) {
        dist[u] = nd;
        pq.push({nd, u});
      }
    }
  }
  return dist;
}

ConfluentRouting shortest_path_tree(const Network& net, NodeId sink) {
  std::vector<std::int64_t> dist(net.n(), kUnreachable);
  ConfluentRouting r = empty_routing(net);
  using Item = std::pair<std::int64_t, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  std::vector<bool> done(net.n(), false);
  dist[sink] = 0;
  pq.push({0, sink});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = true;
    for (ArcId a : net.in_arcs(v)) {
      const NodeId u = net.tail(a);
      if (net.is_sink(u) || done[u]) continue;
      const std::int64_t nd = d + net.arc_len(a);
      if (nd < dist[u]) {
        dist[u] = nd;
        r.out_arc[u] = a;
        pq.push({nd, u});
      }
    }
  }
  return r;
}

ConfluentRouting restrict_routing(const Network& net, const ConfluentRouting& r,
                                  const std::vector<NodeId>& sources) {
  ConfluentRouting out = empty_routing(net);
  for (NodeId s : sources) {
    for (ArcId a : tree_path(net, r, s).arcs) out.out_arc[net.tail(a)] = a;
  }
  return out;
}

}  // namespace confluent::detail
