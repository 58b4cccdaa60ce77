#include "tourguide/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "tourguide/solver.hpp"

namespace tourguide {

namespace {

// Unvisited transitive prerequisites of `target` in a valid visiting order
// (lowest id first among ready sites), followed by `target`.
std::vector<int> chain_to(const TourProblem& p, const std::vector<std::uint8_t>& visited, int target) {
  const int n = p.n_sites;
  std::vector<std::uint8_t> need(n, 0);
  need[target] = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [a, b] : p.sequence)
      if (need[b] && !need[a] && !visited[a]) need[a] = grew = true;
  }
  std::vector<int> chain;
  std::vector<std::uint8_t> placed(n, 0);
  for (;;) {
    int next = -1;
    for (int s = 1; s < n && next < 0; ++s) {
      if (!need[s] || placed[s]) continue;
      bool ready = true;
      for (const auto& [a, b] : p.sequence)
        if (b == s && need[a] && !placed[a]) ready = false;
      if (ready) next = s;
    }
    if (next < 0) break;
    placed[next] = 1;
    chain.push_back(next);
  }
  return chain;
}

double limit_of(const TourProblem& p) { return p.t_lim + 1e-9 * std::max(1.0, p.t_lim); }

}  // namespace

TourSolution plan_greedy_time(const TourProblem& p) {
  check_problem(p);
  const std::vector<int> demand = p.site_demand();
  std::vector<std::uint8_t> visited(p.n_sites, 0);
  visited[0] = 1;
  std::vector<int> route;
  int here = 0;
  double time = 0.0;
  for (;;) {
    int best_site = -1;
    double best_dist = kUnreachable;
    std::vector<int> best_chain;
    double best_time = 0.0;
    for (int m = 1; m < p.n_sites; ++m) {
      if (visited[m] || demand[m] == 0) continue;
      const std::vector<int> chain = chain_to(p, visited, m);
      double dist = 0.0;
      double t = time;
      int at = here;
      for (int s : chain) {
        dist += p.travel(at, s);
        t += p.travel(at, s) + p.dwell[s];
        at = s;
      }
      if (t + p.travel(m, 0) > limit_of(p)) continue;
      if (dist < best_dist) {
        best_dist = dist;
        best_site = m;
        best_chain = chain;
        best_time = t;
      }
    }
    if (best_site < 0) break;
    for (int s : best_chain) {
      visited[s] = 1;
      route.push_back(s);
    }
    here = best_site;
    time = best_time;
  }
  return make_solution(p, route);
}

TourSolution plan_greedy_demand(const TourProblem& p) {
  check_problem(p);
  const std::vector<int> demand = p.site_demand();
  std::vector<int> order;
  for (int m = 1; m < p.n_sites; ++m)
    if (demand[m] > 0) order.push_back(m);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return p.rank(a) != p.rank(b) ? p.rank(a) < p.rank(b) : a < b;
  });
  std::vector<std::uint8_t> visited(p.n_sites, 0);
  visited[0] = 1;
  std::vector<int> route;
  int here = 0;
  double time = 0.0;
  for (int m : order) {
    if (visited[m]) continue;
    const std::vector<int> chain = chain_to(p, visited, m);
    double t = time;
    int at = here;
    for (int s : chain) {
      t += p.travel(at, s) + p.dwell[s];
      at = s;
    }
    if (t + p.travel(m, 0) > limit_of(p)) continue;
    for (int s : chain) {
      visited[s] = 1;
      route.push_back(s);
    }
    here = m;
    time = t;
  }
  return make_solution(p, route);
}

TourSolution plan_unconstrained(const TourProblem& p) {
  check_problem(p);
  const int n = p.n_sites;
  const std::vector<int> demand = p.site_demand();
  std::vector<std::uint8_t> need(n, 0);
  for (int m = 1; m < n; ++m) need[m] = demand[m] > 0;
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [a, b] : p.sequence)
      if (need[b] && !need[a]) need[a] = grew = true;
  }
  std::vector<int> sites;
  for (int m = 1; m < n; ++m)
    if (need[m]) sites.push_back(m);
  const int k = static_cast<int>(sites.size());
  if (k > kMaxUnconstrainedSites)
    throw Error("unconstrained planner supports at most " + std::to_string(kMaxUnconstrainedSites) + " sites");
  if (k == 0) return make_solution(p, {});

  std::vector<int> slot(n, -1);
  for (int c = 0; c < k; ++c) slot[sites[c]] = c;
  std::vector<std::uint32_t> prereq(k, 0);
  for (const auto& [a, b] : p.sequence)
    if (slot[b] >= 0) prereq[slot[b]] |= 1u << slot[a];

  // dp[mask * k + last]: least time from the depot through `mask`, ending
  // after the dwell at `last`.
  const std::size_t states = std::size_t{1} << k;
  std::vector<double> dp(states * k, kUnreachable);
  for (int c = 0; c < k; ++c)
    if (prereq[c] == 0) dp[(std::size_t{1} << c) * k + c] = p.travel(0, sites[c]) + p.dwell[sites[c]];
  for (std::size_t mask = 1; mask < states; ++mask) {
    for (int last = 0; last < k; ++last) {
      const double cur = dp[mask * k + last];
      if (!std::isfinite(cur)) continue;
      for (int c = 0; c < k; ++c) {
        if (mask >> c & 1u) continue;
        if ((prereq[c] & mask) != prereq[c]) continue;
        const std::size_t next = (mask | (std::size_t{1} << c)) * k + c;
        const double t = cur + p.travel(sites[last], sites[c]) + p.dwell[sites[c]];
        if (t < dp[next]) dp[next] = t;
      }
    }
  }
  const std::size_t full = states - 1;
  int last = -1;
  double best = kUnreachable;
  for (int c = 0; c < k; ++c) {
    const double t = dp[full * k + c] + p.travel(sites[c], 0);
    if (t < best - 1e-9) {
      best = t;
      last = c;
    }
  }
  if (last < 0) throw NoRouteError();
  // Walk predecessors back; ties resolved towards the lowest slot.
  std::vector<int> route;
  std::size_t mask = full;
  for (int cur = last;;) {
    route.push_back(sites[cur]);
    const std::size_t prev_mask = mask & ~(std::size_t{1} << cur);
    if (prev_mask == 0) break;
    const double here = dp[mask * k + cur];
    int prev = -1;
    for (int c = 0; c < k && prev < 0; ++c) {
      if (!(prev_mask >> c & 1u)) continue;
      const double t = dp[prev_mask * k + c] + p.travel(sites[c], sites[cur]) + p.dwell[sites[cur]];
      if (std::abs(t - here) <= 1e-9 * std::max(1.0, here)) prev = c;
    }
    mask = prev_mask;
    cur = prev;
  }
  std::reverse(route.begin(), route.end());
  return make_solution(p, route);
}

const char* to_string(Planner planner) {
  switch (planner) {
    case Planner::Optimal: return "optimal";
    case Planner::GreedyTime: return "greedy-time";
    case Planner::GreedyDemand: return "greedy-demand";
    case Planner::Unconstrained: return "unconstrained";
  }
  return "?";
}

Planner parse_planner(std::string_view text) {
  for (Planner p : {Planner::Optimal, Planner::GreedyTime, Planner::GreedyDemand, Planner::Unconstrained})
    if (text == to_string(p)) return p;
  throw Error("unknown planner '" + std::string(text) + "'");
}

TourSolution run_planner(Planner planner, const TourProblem& p) {
  switch (planner) {
    case Planner::Optimal: return solve_optimal(p).first;
    case Planner::GreedyTime: return plan_greedy_time(p);
    case Planner::GreedyDemand: return plan_greedy_demand(p);
    case Planner::Unconstrained: return plan_unconstrained(p);
  }
  throw Error("unknown planner");
}

}  // namespace tourguide
