#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tourguide/tour.hpp"

namespace tourguide {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b)); }

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

std::vector<Violation> validate_solution(const TourProblem& p, const TourSolution& s) {
  std::vector<Violation> out;
  auto add = [&](const char* tag, std::string detail) { out.push_back({tag, std::move(detail)}); };
  const int n = p.n_sites;
  const auto& order = s.visit_order;

  if (order.size() < 2 || order.front() != 0 || order.back() != 0) {
    add("Depot_endpoints", "visit order must start and end at the depot");
    return out;
  }
  bool in_range = true;
  for (std::size_t k = 1; k + 1 < order.size(); ++k) {
    if (order[k] < 1 || order[k] >= n) {
      add("Site_range", "entry " + std::to_string(k) + " is not a non-depot site");
      in_range = false;
    }
  }
  if (!in_range) return out;

  // Edge usage x_ij as implied by consecutive visits.
  std::vector<int> in(n, 0), out_deg(n, 0);
  for (std::size_t k = 1; k < order.size(); ++k) {
    ++out_deg[order[k - 1]];
    ++in[order[k]];
  }
  for (int m = 1; m < n; ++m) {
    if (in[m] != out_deg[m]) add("Eq4_flow", "site " + std::to_string(m) + " in/out degree differ");
    if (in[m] > 1) add("Eq5_at_most_once", "site " + std::to_string(m) + " visited " + std::to_string(in[m]) + " times");
  }

  if (static_cast<int>(s.visited.size()) != n) {
    add("Eq2_binary", "visited flag vector has wrong size");
  } else {
    for (int m = 0; m < n; ++m) {
      if (s.visited[m] > 1) add("Eq2_binary", "y_" + std::to_string(m) + " is not binary");
      const int expect = m == 0 ? 1 : (in[m] > 0 ? 1 : 0);
      if ((s.visited[m] != 0) != (expect != 0))
        add("Link_visit_flow", "y_" + std::to_string(m) + " disagrees with incoming edges");
    }
  }

  for (std::size_t k = 1; k + 1 < order.size(); ++k)
    if (!(p.dwell[order[k]] > 0.0)) add("Eq3_dwell", "site " + std::to_string(order[k]) + " has no positive dwell");

  double travel = 0.0;
  double dwell = 0.0;
  for (std::size_t k = 1; k < order.size(); ++k) travel += p.times[static_cast<std::size_t>(order[k - 1]) * n + order[k]];
  for (std::size_t k = 1; k + 1 < order.size(); ++k) dwell += p.dwell[order[k]];
  const double t_total = travel + dwell;
  if (!close(s.total_time, t_total))
    add("Eq6_total_time", fmt("reported T %.9g but edges and dwell sum to %.9g", s.total_time, t_total));
  if (t_total > p.t_lim + 1e-6 * std::max(1.0, p.t_lim))
    add("Eq9_time_limit", fmt("T %.9g exceeds limit %.9g", t_total, p.t_lim));

  if (s.arrival.size() != order.size()) {
    add("Eq7_time_in", "arrival list length differs from visit order");
  } else {
    if (!close(s.arrival[0], 0.0)) add("Eq7_time_in", "tour must start at time 0");
    for (std::size_t k = 1; k < order.size(); ++k) {
      const int a = order[k - 1];
      const int b = order[k];
      const double expect = s.arrival[k - 1] + p.dwell[a] + p.times[static_cast<std::size_t>(a) * n + b];
      if (s.arrival[k] + 1e-6 * std::max(1.0, expect) < expect)
        add("Eq7_time_in", fmt("arrival %.9g earlier than %.9g", s.arrival[k], expect));
      else if (!close(s.arrival[k], expect))
        add("Eq8_time_out", fmt("arrival %.9g later than %.9g", s.arrival[k], expect));
    }
  }

  std::vector<int> pos(n, -1);
  for (std::size_t k = 1; k + 1 < order.size(); ++k)
    if (pos[order[k]] < 0) pos[order[k]] = static_cast<int>(k);
  for (const auto& [i, j] : p.sequence) {
    if (i < 0 || i >= n || j < 0 || j >= n) continue;
    if (pos[j] >= 0 && pos[i] < 0)
      add("Eq10_sequence", "site " + std::to_string(j) + " visited without prerequisite " + std::to_string(i));
    else if (pos[j] >= 0 && pos[i] > pos[j])
      add("Eq11_sequence_order", "site " + std::to_string(i) + " must come before " + std::to_string(j));
  }

  std::vector<std::uint8_t> seen(n, 0);
  for (std::size_t k = 1; k + 1 < order.size(); ++k) seen[order[k]] = 1;
  int dropped = 0;
  std::vector<int> per_client(p.demand.clients(), 0);
  for (int l = 0; l < p.demand.clients(); ++l)
    for (int i = 0; i < p.demand.aois() && i + 1 < n; ++i)
      if (p.demand.requested(l, i) && !seen[i + 1]) ++per_client[l];
  for (int d : per_client) dropped += d;
  if (s.dropped != dropped || s.dropped_per_client != per_client)
    add("Dropped_demand", "dropped demand count disagrees with visited sites");
  const double obj = p.w_d * dropped + p.w_t * t_total;
  if (!close(s.objective, obj)) add("Eq1_objective", fmt("objective %.9g, recomputed %.9g", s.objective, obj));
  return out;
}

std::string format_violations(const std::vector<Violation>& v) {
  std::string out;
  for (const auto& x : v) out += x.tag + ": " + x.detail + "\n";
  return out;
}

}  // namespace tourguide
