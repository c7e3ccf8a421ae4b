#include "phyllo/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "phyllo/errors.hpp"

namespace phyllo::matching {

namespace {

/// Dinic max-flow on a small dense-ish graph.
class Dinic {
 public:
  explicit Dinic(int n) : head_(static_cast<size_t>(n), -1), level_(n), iter_(n) {}

  void add_edge(int u, int v, int cap) {
    edges_.push_back({v, head_[static_cast<size_t>(u)], cap});
    head_[static_cast<size_t>(u)] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({u, head_[static_cast<size_t>(v)], 0});
    head_[static_cast<size_t>(v)] = static_cast<int>(edges_.size()) - 1;
  }

  int max_flow(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      while (int f = dfs(s, t, std::numeric_limits<int>::max())) flow += f;
    }
    return flow;
  }

 private:
  struct Edge {
    int to, next, cap;
  };
  std::vector<int> head_;
  std::vector<Edge> edges_;
  std::vector<int> level_, iter_;

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[static_cast<size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int e = head_[static_cast<size_t>(u)]; e != -1; e = edges_[static_cast<size_t>(e)].next) {
        const Edge& ed = edges_[static_cast<size_t>(e)];
        if (ed.cap > 0 && level_[static_cast<size_t>(ed.to)] < 0) {
          level_[static_cast<size_t>(ed.to)] = level_[static_cast<size_t>(u)] + 1;
          q.push(ed.to);
        }
      }
    }
    return level_[static_cast<size_t>(t)] >= 0;
  }

  int dfs(int u, int t, int f) {
    if (u == t) return f;
    for (int& e = iter_[static_cast<size_t>(u)]; e != -1; e = edges_[static_cast<size_t>(e)].next) {
      Edge& ed = edges_[static_cast<size_t>(e)];
      if (ed.cap > 0 && level_[static_cast<size_t>(ed.to)] == level_[static_cast<size_t>(u)] + 1) {
        int d = dfs(ed.to, t, std::min(f, ed.cap));
        if (d > 0) {
          ed.cap -= d;
          edges_[static_cast<size_t>(e ^ 1)].cap += d;
          return d;
        }
      }
    }
    return 0;
  }

  friend struct FlowProbe;

 public:
  // exposes the a->b matching after max_flow
  [[nodiscard]] std::vector<std::pair<int, int>> saturated_pairs(int a_base, int a_count,
                                                                 int b_base) const {
    std::vector<std::pair<int, int>> out;
    for (size_t e = 0; e < edges_.size(); e += 2) {
      int u = edges_[e ^ 1].to;  // origin of forward edge
      int v = edges_[e].to;
      if (u >= a_base && u < a_base + a_count && v >= b_base && edges_[e].cap == 0 &&
          edges_[e ^ 1].cap == 1)
        out.emplace_back(u - a_base, v - b_base);
    }
    return out;
  }
};

struct Pair {
  int a, b;
  double dist;
};

// Feasibility of a covering matching restricted to pairs[0..m): max-flow with
// lower bound 1 on mandatory vertices (standard excess-node transformation).
bool feasible(int na, int nb, const std::vector<bool>& am, const std::vector<bool>& bm,
              const std::vector<Pair>& pairs, size_t m,
              std::vector<int>* match_out = nullptr) {
  // nodes: 0 = s, 1 = t, 2 = S*, 3 = T*, a_i = 4 + i, b_j = 4 + na + j
  int a_base = 4, b_base = 4 + na;
  Dinic dinic(4 + na + nb);
  int need = 0;
  for (int i = 0; i < na; ++i) {
    if (am[static_cast<size_t>(i)]) {
      // lower bound 1 on s->a: excess a +1, deficit s -1
      dinic.add_edge(2, a_base + i, 1);
      dinic.add_edge(0, 3, 1);
      ++need;
    } else {
      dinic.add_edge(0, a_base + i, 1);
    }
  }
  for (int j = 0; j < nb; ++j) {
    if (bm[static_cast<size_t>(j)]) {
      dinic.add_edge(2, 1, 1);
      dinic.add_edge(b_base + j, 3, 1);
      ++need;
    } else {
      dinic.add_edge(b_base + j, 1, 1);
    }
  }
  for (size_t k = 0; k < m; ++k)
    dinic.add_edge(a_base + pairs[k].a, b_base + pairs[k].b, 1);
  // circulation closure
  dinic.add_edge(1, 0, std::numeric_limits<int>::max() / 2);
  int got = dinic.max_flow(2, 3);
  if (got != need) return false;
  if (match_out) {
    auto sat = dinic.saturated_pairs(a_base, na, b_base);
    match_out->assign(static_cast<size_t>(na), -1);
    for (auto [i, j] : sat)
      if (j < nb) (*match_out)[static_cast<size_t>(i)] = j;
  }
  return true;
}

}  // namespace

BottleneckResult bottleneck_match(const std::vector<std::complex<double>>& a_pts,
                                  const std::vector<bool>& a_mandatory,
                                  const std::vector<std::complex<double>>& b_pts,
                                  const std::vector<bool>& b_mandatory,
                                  double eps_cap) {
  int na = static_cast<int>(a_pts.size());
  int nb = static_cast<int>(b_pts.size());
  std::vector<Pair> pairs;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      double d = std::abs(a_pts[static_cast<size_t>(i)] - b_pts[static_cast<size_t>(j)]);
      if (d <= eps_cap) pairs.push_back({i, j, d});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& l, const Pair& r) { return l.dist < r.dist; });

  if (!feasible(na, nb, a_mandatory, b_mandatory, pairs, pairs.size()))
    throw MatchingInfeasible("bottleneck_match: no covering within eps_cap");

  // binary search over the sorted pair distances for the smallest feasible prefix
  size_t lo = 0, hi = pairs.size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (feasible(na, nb, a_mandatory, b_mandatory, pairs, mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  BottleneckResult res;
  res.eps = lo == 0 ? 0.0 : pairs[lo - 1].dist;
  feasible(na, nb, a_mandatory, b_mandatory, pairs, lo, &res.pair_of_a);
  return res;
}

}  // namespace phyllo::matching
