#pragma once

#include "tourguide/tour.hpp"

namespace tourguide {

// Repeatedly walks to the nearest requested site (by travel time, including
// any prerequisite detour) that still allows a timely return to the depot.
TourSolution plan_greedy_time(const TourProblem& p);

// Tries requested sites in popularity order, appending each (with its
// prerequisites) when the tour can still return within the time limit.
TourSolution plan_greedy_demand(const TourProblem& p);

inline constexpr int kMaxUnconstrainedSites = 20;

// Shortest depot-to-depot tour covering every requested site (and its
// prerequisites), ignoring the time limit.
TourSolution plan_unconstrained(const TourProblem& p);

enum class Planner { Optimal, GreedyTime, GreedyDemand, Unconstrained };
const char* to_string(Planner planner);
Planner parse_planner(std::string_view text);
TourSolution run_planner(Planner planner, const TourProblem& p);

}  // namespace tourguide
