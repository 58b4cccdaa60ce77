#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tourguide/tour.hpp"

namespace tourguide {

// Mixed-integer form of the tour problem with the depot split into a virtual
// start `s` and end `e`. Variables: x_a_b (arc used), y_m (site visited),
// t_a (arrival time), T (tour duration).
enum class VarType { Binary, Continuous };
enum class Sense { LessEq, Equal, GreaterEq };

struct ModelVar {
  std::string name;
  VarType type = VarType::Continuous;
  double lb = 0.0;
  double ub = 0.0;
};

struct LinearConstraint {
  std::string tag;   // constraint family, e.g. "Eq7_time_in"
  std::string name;  // unique instance name
  std::vector<std::pair<int, double>> terms;
  Sense sense = Sense::LessEq;
  double rhs = 0.0;
};

struct TourModel {
  std::vector<ModelVar> vars;
  double objective_constant = 0.0;
  std::vector<std::pair<int, double>> objective;
  std::vector<LinearConstraint> constraints;
  // Dwell bounds T_i > 0; problem data rather than rows over variables.
  std::vector<std::pair<int, double>> dwell_bounds;

  int var(std::string_view name) const;  // -1 when absent
  std::size_t count_vars(VarType type) const;
  std::size_t count_prefix(std::string_view prefix) const;  // variables by name prefix
  std::size_t count(std::string_view tag) const;            // constraints by family
};

struct ModelCounts {
  std::size_t x = 0, y = 0, t = 0;
  std::size_t eq2 = 0, eq3 = 0, eq4 = 0, eq5 = 0, link = 0, depot = 0, start = 0;
  std::size_t eq6 = 0, eq7 = 0, eq8 = 0, eq9 = 0, eq10 = 0, eq11 = 0;
};

// Counts as functions of the site count and number of sequence pairs.
ModelCounts expected_model_counts(int n_sites, int n_sequence);
ModelCounts model_counts(const TourModel& m);

TourModel build_model(const TourProblem& p);

// LP-style listing with family tags on every row.
std::string dump_model(const TourModel& m, const TourProblem& p);

// Variable values realizing a solution (unvisited sites get t = t_lim).
std::vector<double> model_assignment(const TourModel& m, const TourProblem& p, const TourSolution& s);
double model_objective(const TourModel& m, const std::vector<double>& values);
// Names of rows violated by more than `tol`.
std::vector<std::string> violated_rows(const TourModel& m, const std::vector<double>& values,
                                       double tol = 1e-6);

}  // namespace tourguide
