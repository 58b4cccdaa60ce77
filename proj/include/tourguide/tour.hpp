#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tourguide/demand.hpp"
#include "tourguide/router.hpp"

namespace tourguide {

// Sites are 0..n_sites-1 with the depot at 0; AOI index i is site i + 1.
struct TourProblem {
  int n_sites = 1;
  std::vector<double> times;   // n_sites^2, row-major seconds
  std::vector<double> dwell;   // per site; dwell[0] = 0
  DemandMatrix demand;         // clients x (n_sites - 1)
  std::vector<int> popularity_rank;  // per AOI index; empty means rank = index
  double t_lim = 800.0;
  std::vector<std::pair<int, int>> sequence;  // (i, j): i must precede j
  double w_d = 8000.0;
  double w_t = 1.0;
  double t_big = 0.0;  // big-M

  double travel(int i, int j) const { return times[static_cast<std::size_t>(i) * n_sites + j]; }
  int rank(int site) const { return popularity_rank.empty() ? site - 1 : popularity_rank[site - 1]; }
  // Clients requesting each site (index 0 is always 0).
  std::vector<int> site_demand() const;
};

// Smallest safe big-M plus one second.
double default_big_m(const TourProblem& p);
// w_t = 1, w_d = 10 * t_lim, t_big = default_big_m.
void apply_default_weights(TourProblem& p);

TourProblem make_problem(const TravelTimeMatrix& m, const std::vector<double>& aoi_dwell,
                         DemandMatrix demand, double t_lim,
                         std::vector<std::pair<int, int>> sequence = {},
                         std::vector<int> popularity_rank = {});

// Throws Error on any invariant violation. t_lim = 0 is accepted.
void check_problem(const TourProblem& p);

struct TourSolution {
  std::vector<int> visit_order{0, 0};   // depot ... depot
  std::vector<std::uint8_t> visited;    // y per site; y[0] = 1
  std::vector<double> arrival;          // per visit_order entry; last is T
  double total_time = 0.0;
  int dropped = 0;
  std::vector<int> dropped_per_client;
  double objective = 0.0;

  // Non-depot sites in visiting order.
  std::vector<int> route() const;
};

// Evaluates a depot-to-depot tour through `route` (non-depot sites, in order).
TourSolution make_solution(const TourProblem& p, const std::vector<int>& route);

// Earliest-start time accounting and dropped demand, shared by all planners.
double route_time(const TourProblem& p, const std::vector<int>& route);
int route_dropped(const TourProblem& p, const std::vector<int>& route);

struct Violation {
  std::string tag;
  std::string detail;
};

// Independent constraint check of an arbitrary candidate solution.
std::vector<Violation> validate_solution(const TourProblem& p, const TourSolution& s);
std::string format_violations(const std::vector<Violation>& v);

}  // namespace tourguide
