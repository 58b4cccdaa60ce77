#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tourguide/baselines.hpp"
#include "tourguide/execution.hpp"
#include "tourguide/router.hpp"
#include "tourguide/topology.hpp"

namespace tourguide {

std::filesystem::path bundled_data_dir();

struct ExperimentConfig {
  std::filesystem::path map_image;  // empty: bundled facility map
  std::filesystem::path map_meta;
  std::filesystem::path sites_file;
  std::vector<Planner> planners{Planner::Optimal, Planner::GreedyTime, Planner::GreedyDemand};
  double sigma = 1.0;
  // Tour-time sweep: each sampling attempt draws its deviation from this set.
  std::vector<double> sweep_sigmas{1.0, 5.0};
  double t_lim = 800.0;
  std::vector<int> bin_edges{5, 10, 15, 20, 25, 30};
  int runs = 50;
  std::uint64_t seed = 1;
  double speed = kDefaultSpeed;
  double dwell_default = 30.0;
  MapBuildOptions map_options{};
  bool record_wall_time = false;  // off keeps CSVs byte-stable
  Execution exec = Execution::Parallel;
};

// Half-open [lo, hi) except the last bin, which includes its upper edge.
struct DemandBin {
  int lo = 0;
  int hi = 0;
  bool closed = false;
  bool contains(int total) const { return total >= lo && (closed ? total <= hi : total < hi); }
};
std::vector<DemandBin> make_bins(const std::vector<int>& edges);

struct RunRecord {
  int run = 0;
  Planner planner = Planner::Optimal;
  int total_demand = 0;
  int dropped = 0;
  double drop_rate = 0.0;
  double tour_time = 0.0;
  double wall_time = 0.0;
  std::uint64_t seed = 0;
  int bin = 0;
};

// Map, sites and graph-backend travel times shared by every instance.
struct ExperimentSetup {
  SiteSet sites;
  TravelTimeMatrix matrix;
  std::vector<double> dwell;
  std::vector<int> popularity_rank;
};
ExperimentSetup load_setup(const ExperimentConfig& config);

inline constexpr int kMaxBinAttempts = 10000;

// The demand instance drawn for one run: client count uniform in 1..10,
// resampled until the total lands in `bin`.
DemandMatrix sample_instance(const ExperimentSetup& setup, double sigma, const DemandBin& bin,
                             std::uint64_t seed);
// Same, with each attempt's deviation drawn uniformly from `sigmas`, so totals
// out of reach of a single deviation still get sampled.
DemandMatrix sample_instance(const ExperimentSetup& setup, const std::vector<double>& sigmas,
                             const DemandBin& bin, std::uint64_t seed);

std::vector<RunRecord> exp_drop_rate(const ExperimentConfig& config, const ExperimentSetup& setup);
std::vector<RunRecord> exp_drop_rate(const ExperimentConfig& config);

// Total demand swept over 1..max_total, `config.runs` instances each.
std::vector<RunRecord> exp_tour_time(const ExperimentConfig& config, const ExperimentSetup& setup,
                                     int max_total = 30);
std::vector<RunRecord> exp_tour_time(const ExperimentConfig& config, int max_total = 30);

std::string format_csv(const std::vector<RunRecord>& records);
void emit_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);
std::vector<RunRecord> parse_csv(std::string_view content);

}  // namespace tourguide
