#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tourguide/experiment.hpp"
#include "tourguide/route_bench.hpp"

namespace tourguide {

enum class PlotKind { DropRateBox, TourTimeLine, RuntimeBars, DemandPmf };
const char* to_string(PlotKind kind);
PlotKind parse_plot_kind(std::string_view text);

// Linear-interpolation quantile of unsorted values, q in [0, 1].
double quantile(std::vector<double> values, double q);

// Box per (demand bin, planner): quartile box, median line, 1.5 IQR whiskers,
// outliers as dots. Bins come from total_demand and `bin_edges`.
std::string svg_drop_rate_box(const std::vector<RunRecord>& records, const std::vector<int>& bin_edges,
                              std::string_view title = "Demand drop rate");
// Mean tour time per total demand and planner, with the time limit dashed.
std::string svg_tour_time_line(const std::vector<RunRecord>& records, double t_lim);
// Grid vs graph matrix time per node count, labelled with the improvement.
std::string svg_runtime_bars(const RouteBenchReport& report);
// One bar chart of popularity_pmf(n, sigma) per sigma.
std::string svg_demand_pmf(int n, const std::vector<double>& sigmas);

void write_plot(const std::filesystem::path& path, std::string_view svg);

}  // namespace tourguide
