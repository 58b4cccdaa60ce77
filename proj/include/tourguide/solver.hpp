#pragma once

#include <cstddef>
#include <utility>

#include "tourguide/tour.hpp"

namespace tourguide {

struct SolverReport {
  std::size_t nodes_explored = 0;
  std::size_t bound_prunings = 0;
  std::size_t dominance_prunings = 0;
  double wall_time = 0.0;  // seconds
  bool proven_optimal = false;
  int candidate_sites = 0;  // sites the search branched over
};

inline constexpr int kMaxSolverSites = 30;  // non-depot sites

// Exact depth-first branch and bound. Among equal objectives the
// lexicographically smallest visit order is returned.
std::pair<TourSolution, SolverReport> solve_optimal(const TourProblem& p);

inline constexpr int kMaxOracleSites = 9;

// Enumerates every subset and permutation of non-depot sites.
TourSolution brute_force_oracle(const TourProblem& p);

}  // namespace tourguide
