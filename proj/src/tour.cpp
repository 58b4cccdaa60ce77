#include "tourguide/tour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tourguide {

std::vector<int> TourProblem::site_demand() const {
  std::vector<int> out(n_sites, 0);
  const auto counts = demand.aoi_counts();
  for (std::size_t i = 0; i < counts.size() && i + 1 < out.size(); ++i) out[i + 1] = counts[i];
  return out;
}

double default_big_m(const TourProblem& p) {
  double max_t = 0.0;
  for (double t : p.times) max_t = std::max(max_t, t);
  double max_d = 0.0;
  for (double d : p.dwell) max_d = std::max(max_d, d);
  return p.t_lim + max_t + max_d + 1.0;
}

void apply_default_weights(TourProblem& p) {
  p.w_t = 1.0;
  p.w_d = 10.0 * p.t_lim;
  if (!(p.w_d > 0.0)) p.w_d = 1.0;  // t_lim = 0: any positive weight gives the same argmin
  p.t_big = default_big_m(p);
}

TourProblem make_problem(const TravelTimeMatrix& m, const std::vector<double>& aoi_dwell,
                         DemandMatrix demand, double t_lim,
                         std::vector<std::pair<int, int>> sequence,
                         std::vector<int> popularity_rank) {
  TourProblem p;
  p.n_sites = m.n;
  p.times = m.seconds;
  p.dwell.assign(1, 0.0);
  p.dwell.insert(p.dwell.end(), aoi_dwell.begin(), aoi_dwell.end());
  p.demand = std::move(demand);
  p.popularity_rank = std::move(popularity_rank);
  p.t_lim = t_lim;
  p.sequence = std::move(sequence);
  apply_default_weights(p);
  return p;
}

void check_problem(const TourProblem& p) {
  const int n = p.n_sites;
  if (n < 1) throw Error("problem needs at least the depot");
  if (p.times.size() != static_cast<std::size_t>(n) * n) throw Error("travel-time matrix size mismatch");
  for (double t : p.times) {
    if (std::isinf(t)) throw Error("travel-time matrix has unreachable (infinite) entries");
    if (!std::isfinite(t) || t < 0.0) throw Error("travel times must be finite and non-negative");
  }
  if (static_cast<int>(p.dwell.size()) != n) throw Error("dwell list size mismatch");
  if (p.dwell[0] != 0.0) throw Error("depot dwell must be 0");
  for (int i = 1; i < n; ++i)
    if (!(p.dwell[i] > 0.0) || !std::isfinite(p.dwell[i]))
      throw Error("dwell of site " + std::to_string(i) + " must be positive");
  if (p.demand.aois() != n - 1) throw Error("demand matrix width must equal the AOI count");
  if (!p.popularity_rank.empty()) {
    if (static_cast<int>(p.popularity_rank.size()) != n - 1) throw Error("popularity rank list size mismatch");
    aois_by_rank(p.popularity_rank);
  }
  if (!(p.t_lim >= 0.0) || !std::isfinite(p.t_lim)) throw Error("time limit must be finite and non-negative");
  if (!(p.w_d > 0.0) || !(p.w_t > 0.0)) throw Error("weights must be positive");
  double max_t = 0.0;
  for (double t : p.times) max_t = std::max(max_t, t);
  double max_d = 0.0;
  for (double d : p.dwell) max_d = std::max(max_d, d);
  if (p.t_big < p.t_lim + max_t + max_d) throw Error("big-M constant is too small");

  std::vector<std::vector<int>> succ(n);
  for (const auto& [i, j] : p.sequence) {
    if (i < 1 || i >= n || j < 1 || j >= n || i == j)
      throw Error("sequence pair (" + std::to_string(i) + ", " + std::to_string(j) + ") is invalid");
    succ[i].push_back(j);
  }
  // Kahn's algorithm for cycle detection.
  std::vector<int> indeg(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j : succ[i]) ++indeg[j];
  std::vector<int> ready;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push_back(i);
  int seen = 0;
  while (!ready.empty()) {
    const int u = ready.back();
    ready.pop_back();
    ++seen;
    for (int v : succ[u])
      if (--indeg[v] == 0) ready.push_back(v);
  }
  if (seen != n) throw Error("sequence constraints contain a cycle");
}

std::vector<int> TourSolution::route() const {
  if (visit_order.size() < 2) return {};
  return std::vector<int>(visit_order.begin() + 1, visit_order.end() - 1);
}

double route_time(const TourProblem& p, const std::vector<int>& route) {
  double t = 0.0;
  int prev = 0;
  for (int s : route) {
    t += p.travel(prev, s) + p.dwell[s];
    prev = s;
  }
  return t + p.travel(prev, 0);
}

int route_dropped(const TourProblem& p, const std::vector<int>& route) {
  std::vector<std::uint8_t> y(p.n_sites, 0);
  for (int s : route) y[s] = 1;
  int dropped = 0;
  for (int l = 0; l < p.demand.clients(); ++l)
    for (int i = 0; i < p.demand.aois(); ++i)
      if (p.demand.requested(l, i) && !y[i + 1]) ++dropped;
  return dropped;
}

TourSolution make_solution(const TourProblem& p, const std::vector<int>& route) {
  TourSolution s;
  s.visit_order.assign(1, 0);
  s.visit_order.insert(s.visit_order.end(), route.begin(), route.end());
  s.visit_order.push_back(0);
  s.visited.assign(p.n_sites, 0);
  s.visited[0] = 1;
  for (int v : route) {
    if (v < 1 || v >= p.n_sites) throw Error("route site out of range");
    s.visited[v] = 1;
  }
  s.arrival.assign(s.visit_order.size(), 0.0);
  for (std::size_t k = 1; k < s.visit_order.size(); ++k) {
    const int a = s.visit_order[k - 1];
    const int b = s.visit_order[k];
    s.arrival[k] = s.arrival[k - 1] + p.dwell[a] + p.travel(a, b);
  }
  s.total_time = s.arrival.back();
  s.dropped_per_client.assign(p.demand.clients(), 0);
  for (int l = 0; l < p.demand.clients(); ++l)
    for (int i = 0; i < p.demand.aois(); ++i)
      if (p.demand.requested(l, i) && !s.visited[i + 1]) ++s.dropped_per_client[l];
  s.dropped = 0;
  for (int d : s.dropped_per_client) s.dropped += d;
  s.objective = p.w_d * s.dropped + p.w_t * s.total_time;
  return s;
}

}  // namespace tourguide
