#pragma once

// Brute-force reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "tourguide/clearance.hpp"
#include "tourguide/grid.hpp"
#include "tourguide/rng.hpp"
#include "tourguide/tour.hpp"

namespace oracle {

using namespace tourguide;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline OccupancyGrid random_grid(int w, int h, double occupied, Rng& rng, double res = 0.05) {
  OccupancyGrid g(w, h, res);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (uniform01(rng) < occupied) g.set(c, r, CellState::Occupied);
  return g;
}

// Distance from each Free cell center to the nearest non-Free cell center.
inline std::vector<double> clearance(const OccupancyGrid& g) {
  std::vector<Cell> obstacles;
  for (int r = 0; r < g.height(); ++r)
    for (int c = 0; c < g.width(); ++c)
      if (g.at(c, r) != CellState::Free) obstacles.push_back({c, r});
  std::vector<double> out(g.size(), 0.0);
  for (int r = 0; r < g.height(); ++r)
    for (int c = 0; c < g.width(); ++c) {
      if (g.at(c, r) != CellState::Free) continue;
      double best = kInf;
      for (const Cell& o : obstacles)
        best = std::min(best, std::hypot(double(o.col - c), double(o.row - r)) * g.resolution());
      out[g.index(c, r)] = best;
    }
  return out;
}

// Uniform-cost search over 8-connected Free cells.
inline double ucs_length(const OccupancyGrid& g, Cell s, Cell t) {
  std::vector<double> dist(g.size(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[g.index(s.col, s.row)] = 0.0;
  pq.push({0.0, g.index(s.col, s.row)});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    const Cell cu = g.cell_of(u);
    if (cu.col == t.col && cu.row == t.row) return d;
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        if (!dr && !dc) continue;
        const int c = cu.col + dc, r = cu.row + dr;
        if (!g.is_free(c, r)) continue;
        const double nd = d + g.resolution() * ((dr && dc) ? std::sqrt(2.0) : 1.0);
        const std::size_t v = g.index(c, r);
        if (nd < dist[v]) {
          dist[v] = nd;
          pq.push({nd, v});
        }
      }
  }
  return kInf;
}

// Travel + dwell time of depot -> route -> depot, computed from scratch.
inline double tour_time(const TourProblem& p, const std::vector<int>& route) {
  double t = 0.0;
  int prev = 0;
  for (int s : route) {
    t += p.travel(prev, s) + p.dwell[s];
    prev = s;
  }
  return t + p.travel(prev, 0);
}

inline int dropped(const TourProblem& p, const std::vector<int>& route) {
  int d = 0;
  for (int l = 0; l < p.demand.clients(); ++l)
    for (int i = 0; i < p.demand.aois(); ++i)
      if (p.demand.requested(l, i) && std::find(route.begin(), route.end(), i + 1) == route.end()) ++d;
  return d;
}

inline bool respects_sequence(const TourProblem& p, const std::vector<int>& route) {
  for (auto [i, j] : p.sequence) {
    auto pj = std::find(route.begin(), route.end(), j);
    if (pj == route.end()) continue;
    auto pi = std::find(route.begin(), route.end(), i);
    if (pi == route.end() || pi > pj) return false;
  }
  return true;
}

struct Best {
  double objective = kInf;
  double time = 0.0;
  int dropped = 0;
  std::vector<int> route;
};

// Minimum objective over every subset and ordering of non-depot sites.
inline Best optimum(const TourProblem& p) {
  const double slack = 1e-9 * std::max(1.0, p.t_lim);
  const int m = p.n_sites - 1;
  Best best;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> route;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1u) route.push_back(i + 1);
    do {
      if (!respects_sequence(p, route)) continue;
      const double t = tour_time(p, route);
      if (t > p.t_lim + slack) continue;
      const int d = dropped(p, route);
      const double obj = p.w_d * d + p.w_t * t;
      if (obj < best.objective) best = {obj, t, d, route};
    } while (std::next_permutation(route.begin(), route.end()));
  }
  return best;
}

// Sites that must be visited to serve every demand: demanded sites and their
// transitive prerequisites.
inline std::vector<int> required_sites(const TourProblem& p) {
  std::vector<char> need(p.n_sites, 0);
  const auto sd = p.site_demand();
  for (int s = 1; s < p.n_sites; ++s) need[s] = sd[s] > 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [i, j] : p.sequence)
      if (need[j] && !need[i]) need[i] = changed = true;
  }
  std::vector<int> out;
  for (int s = 1; s < p.n_sites; ++s)
    if (need[s]) out.push_back(s);
  return out;
}

// Shortest precedence-respecting route through exactly `sites`.
inline double min_route_time(const TourProblem& p, std::vector<int> sites) {
  std::sort(sites.begin(), sites.end());
  double best = kInf;
  do {
    if (respects_sequence(p, sites)) best = std::min(best, tour_time(p, sites));
  } while (std::next_permutation(sites.begin(), sites.end()));
  return best;
}

struct InstanceOptions {
  int min_sites = 2;
  int max_sites = 8;
  int max_clients = 4;
  int max_seq = 3;
  double extent = 100.0;  // point cloud side, seconds at unit speed
};

// Random instance: Euclidean times from a point cloud, random dwell, demands,
// acyclic sequence pairs and a time limit spanning infeasible to generous.
inline TourProblem random_problem(Rng& rng, const InstanceOptions& o = {}) {
  const int m = static_cast<int>(uniform_int(rng, o.min_sites, o.max_sites));
  const int n = m + 1;
  std::vector<std::pair<double, double>> pts(n);
  for (auto& pt : pts) pt = {uniform01(rng) * o.extent, uniform01(rng) * o.extent};
  TourProblem p;
  p.n_sites = n;
  p.times.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      p.times[static_cast<std::size_t>(i) * n + j] =
          std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
  p.dwell.assign(n, 0.0);
  for (int i = 1; i < n; ++i) p.dwell[i] = 1.0 + uniform01(rng) * 30.0;
  const int clients = static_cast<int>(uniform_int(rng, 1, o.max_clients));
  p.demand = DemandMatrix(clients, m);
  for (int l = 0; l < clients; ++l)
    for (int i = 0; i < m; ++i)
      if (uniform01(rng) < 0.4) p.demand.set(l, i);
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i + 1;
  for (int i = m - 1; i > 0; --i) std::swap(order[i], order[uniform_int(rng, 0, i)]);
  const int n_seq = static_cast<int>(uniform_int(rng, 0, std::min(o.max_seq, m - 1)));
  for (int k = 0; k < n_seq; ++k) {
    int a = static_cast<int>(uniform_int(rng, 0, m - 2));
    int b = static_cast<int>(uniform_int(rng, a + 1, m - 1));
    std::pair<int, int> pr{order[a], order[b]};
    if (std::find(p.sequence.begin(), p.sequence.end(), pr) == p.sequence.end()) p.sequence.push_back(pr);
  }
  double full = 0.0;
  for (int i = 1; i < n; ++i) full += p.dwell[i] + 2.0 * p.travel(0, i);
  p.t_lim = uniform01(rng) * full;
  apply_default_weights(p);
  return p;
}

}  // namespace oracle
