#include "tourguide/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>

#include "tourguide/baselines.hpp"

namespace tourguide {

namespace {

bool is_metric(const TourProblem& p) {
  const int n = p.n_sites;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (p.travel(i, k) > p.travel(i, j) + p.travel(j, k) + 1e-9) return false;
  return true;
}

double budget_slack(double t_lim) { return 1e-9 * std::max(1.0, t_lim); }
double tie_tol(double best) { return std::isfinite(best) ? 1e-9 * std::max(1.0, std::abs(best)) : 0.0; }

class BranchAndBound {
 public:
  BranchAndBound(const TourProblem& p, SolverReport& report) : p_(p), report_(report) {
    const int n = p.n_sites;
    const std::vector<int> demand = p.site_demand();
    total_demand_ = std::accumulate(demand.begin(), demand.end(), 0);

    // Shortest travel between sites, ignoring dwell: lower bounds on any detour.
    sp_.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sp_[i * n + j] = p.travel(i, j);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sp_[i * n + j] = std::min(sp_[i * n + j], sp_[i * n + k] + sp_[k * n + j]);

    const double limit = p.t_lim + budget_slack(p.t_lim);
    std::vector<std::uint8_t> useful(n, 0);
    if (is_metric(p)) {
      // Visiting a site that is neither demanded nor a prerequisite of one only adds time.
      for (int i = 1; i < n; ++i) useful[i] = demand[i] > 0;
      for (bool grew = true; grew;) {
        grew = false;
        for (const auto& [a, b] : p.sequence)
          if (useful[b] && !useful[a]) useful[a] = grew = true;
      }
      for (int i = 1; i < n; ++i)
        if (useful[i] && p.travel(0, i) + p.dwell[i] + p.travel(i, 0) > limit) useful[i] = 0;
      // Sites whose prerequisites are out of reach are out of reach too.
      for (bool shrank = true; shrank;) {
        shrank = false;
        for (const auto& [a, b] : p.sequence)
          if (useful[b] && !useful[a]) {
            useful[b] = 0;
            shrank = true;
          }
      }
    } else {
      std::fill(useful.begin() + 1, useful.end(), 1);
    }
    for (int i = 1; i < n; ++i)
      if (useful[i]) sites_.push_back(i);
    const int k = static_cast<int>(sites_.size());
    if (k > kMaxSolverSites) throw Error("exact solver supports at most " + std::to_string(kMaxSolverSites) + " candidate sites");
    report_.candidate_sites = k;

    std::vector<int> slot(n, -1);
    for (int c = 0; c < k; ++c) slot[sites_[c]] = c;
    prereq_.assign(k, 0);
    for (const auto& [a, b] : p.sequence)
      if (slot[b] >= 0) prereq_[slot[b]] |= 1u << slot[a];

    value_.resize(k);
    cost_.resize(k);
    min_return_ = k > 0 ? kUnreachable : 0.0;
    for (int c = 0; c < k; ++c) {
      const int m = sites_[c];
      value_[c] = demand[m];
      double min_in = p.travel(0, m);
      for (int d = 0; d < k; ++d)
        if (d != c) min_in = std::min(min_in, p.travel(sites_[d], m));
      cost_[c] = p.dwell[m] + min_in;
      min_return_ = std::min(min_return_, sp_[m * n + 0]);
    }
    ratio_order_.resize(k);
    std::iota(ratio_order_.begin(), ratio_order_.end(), 0);
    std::sort(ratio_order_.begin(), ratio_order_.end(), [&](int a, int b) {
      const double ra = value_[a] * cost_[b];
      const double rb = value_[b] * cost_[a];
      return ra != rb ? ra > rb : a < b;
    });
    limit_ = limit;
    route_.reserve(k);
  }

  // `upper` is the objective of a known feasible tour; the search still
  // returns the lexicographically first tour attaining the optimum.
  std::vector<int> run(double upper) {
    best_ = upper + 2.0 * tie_tol(upper);
    search(0u, -1, 0.0, 0);
    return best_route_;
  }

 private:
  int site_of(int last) const { return last < 0 ? 0 : sites_[last]; }

  void search(std::uint32_t mask, int last, double time, int covered) {
    ++report_.nodes_explored;
    const int here = site_of(last);
    const int n = p_.n_sites;

    const std::uint64_t key = (static_cast<std::uint64_t>(mask) << 5) | static_cast<std::uint64_t>(last + 1);
    auto [it, inserted] = memo_.try_emplace(key, time);
    if (!inserted) {
      if (it->second <= time + 1e-9) {
        ++report_.dominance_prunings;
        return;
      }
      it->second = time;
    }

    const double back = time + p_.travel(here, 0);
    if (back <= limit_) {
      const double obj = p_.w_d * (total_demand_ - covered) + p_.w_t * back;
      if (obj < best_ - tie_tol(best_)) {
        best_ = obj;
        best_route_ = route_;
      }
    }

    // Lower bound over all extensions by at least one site.
    double min_step = kUnreachable;
    for (int c = 0; c < static_cast<int>(sites_.size()); ++c)
      if (!(mask >> c & 1u)) min_step = std::min(min_step, p_.travel(here, sites_[c]) + p_.dwell[sites_[c]]);
    if (!std::isfinite(min_step)) return;
    // Fractional knapsack: covering value v costs at least frac_cost(v),
    // which is convex in v, so the objective bound is minimised over v.
    const double budget = p_.t_lim - time - min_return_;
    const int remaining = total_demand_ - covered;
    double lb = p_.w_d * remaining + p_.w_t * (time + min_step + min_return_);
    double spent = 0.0;
    double value = 0.0;
    for (int c : ratio_order_) {
      if (mask >> c & 1u || value_[c] == 0) continue;
      const double per_unit = cost_[c] / value_[c];
      const double affordable = std::max(0.0, std::min<double>(value_[c], (budget - spent) / per_unit));
      // Integer coverage levels reachable inside this item.
      const int first = static_cast<int>(std::floor(value + 1e-9)) + 1;
      const int last = static_cast<int>(std::floor(value + affordable + 1e-9));
      for (int v = first; v <= last; ++v) {
        const double cost = spent + (v - value) * per_unit;
        const double t = time + std::max(min_step, cost) + min_return_;
        lb = std::min(lb, p_.w_d * (remaining - v) + p_.w_t * t);
      }
      if (affordable < value_[c]) break;
      spent += cost_[c];
      value += value_[c];
    }
    if (lb >= best_ - tie_tol(best_)) {
      ++report_.bound_prunings;
      return;
    }

    for (int c = 0; c < static_cast<int>(sites_.size()); ++c) {
      if (mask >> c & 1u) continue;
      if ((prereq_[c] & mask) != prereq_[c]) continue;
      const int m = sites_[c];
      const double t = time + p_.travel(here, m) + p_.dwell[m];
      if (t + sp_[m * n + 0] > limit_) continue;
      route_.push_back(m);
      search(mask | 1u << c, c, t, covered + value_[c]);
      route_.pop_back();
    }
  }

  const TourProblem& p_;
  SolverReport& report_;
  std::vector<int> sites_;
  std::vector<std::uint32_t> prereq_;
  std::vector<int> value_;
  std::vector<double> cost_;
  std::vector<int> ratio_order_;
  std::vector<double> sp_;
  double min_return_ = 0.0;
  double limit_ = 0.0;
  int total_demand_ = 0;
  std::unordered_map<std::uint64_t, double> memo_;
  std::vector<int> route_;
  std::vector<int> best_route_;
  double best_ = 0.0;
};

}  // namespace

std::pair<TourSolution, SolverReport> solve_optimal(const TourProblem& p) {
  check_problem(p);
  const auto start = std::chrono::steady_clock::now();
  SolverReport report;
  BranchAndBound bb(p, report);
  const double upper = std::min(plan_greedy_time(p).objective, plan_greedy_demand(p).objective);
  const std::vector<int> route = bb.run(upper);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.proven_optimal = true;
  return {make_solution(p, route), report};
}

TourSolution brute_force_oracle(const TourProblem& p) {
  check_problem(p);
  const int sites = p.n_sites - 1;
  if (sites > kMaxOracleSites) throw Error("oracle supports at most " + std::to_string(kMaxOracleSites) + " sites");
  const double limit = p.t_lim + budget_slack(p.t_lim);
  std::vector<int> best_order;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pos(p.n_sites);
  for (std::uint32_t subset = 0; subset < (1u << sites); ++subset) {
    std::vector<int> route;
    for (int i = 0; i < sites; ++i)
      if (subset >> i & 1u) route.push_back(i + 1);
    do {
      std::fill(pos.begin(), pos.end(), -1);
      for (std::size_t k = 0; k < route.size(); ++k) pos[route[k]] = static_cast<int>(k);
      bool ok = true;
      for (const auto& [a, b] : p.sequence)
        if (pos[b] >= 0 && (pos[a] < 0 || pos[a] > pos[b])) ok = false;
      if (!ok) continue;
      const double t = route_time(p, route);
      if (t > limit) continue;
      const double obj = p.w_d * route_dropped(p, route) + p.w_t * t;
      const bool better = obj < best - tie_tol(best);
      const bool tie = !better && obj <= best + tie_tol(best);
      if (better || (tie && route < best_order)) {
        best = obj;
        best_order = route;
      }
    } while (std::next_permutation(route.begin(), route.end()));
  }
  return make_solution(p, best_order);
}

}  // namespace tourguide
