#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tourguide/solver.hpp"
#include "tourguide/tour.hpp"

namespace tourguide {

// Sections:
//   [sites]       n <count>; matrix (then n rows) or matrix_file <path>;
//                 dwell <n-1 values>; optional rank <n-1 values>
//   [demand]      one line per client: requested site ids
//   [constraints] tlim <s>; seq <i> <j>
//   [weights]     wd <w>; wt <w>; TL <s>   (each optional)
// Relative matrix_file paths resolve against `base_dir`.
TourProblem parse_scenario(std::string_view content, const std::filesystem::path& base_dir = {});
TourProblem load_scenario(const std::filesystem::path& path);
std::string format_scenario(const TourProblem& p);

std::string format_solution(const TourSolution& s, std::string_view planner,
                            const SolverReport* report = nullptr);
TourSolution parse_solution(std::string_view content);

}  // namespace tourguide
