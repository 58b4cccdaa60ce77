#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "tourguide/baselines.hpp"
#include "tourguide/experiment.hpp"
#include "tourguide/model.hpp"
#include "tourguide/plot.hpp"
#include "tourguide/route_bench.hpp"
#include "tourguide/scenario.hpp"
#include "tourguide/solver.hpp"
#include "tourguide/synthetic_maps.hpp"

namespace fs = std::filesystem;
using namespace tourguide;

namespace {

struct Globals {
  double speed = kDefaultSpeed;
  double dwell_default = 30.0;
};

struct MapArgs {
  std::string map;
  std::string meta;
  std::string sites;
  double robot_radius = 0.2;
  double min_branch = 0.5;
  std::optional<double> min_clearance;

  void add(CLI::App* app, bool with_sites) {
    app->add_option("--map", map, "Occupancy image (PGM); default: bundled facility map");
    app->add_option("--meta", meta, "Map metadata file");
    if (with_sites) app->add_option("--sites", sites, "Site file (id 0 = depot)");
    app->add_option("--robot-radius", robot_radius, "Inflation radius [m]")->capture_default_str();
    app->add_option("--min-branch", min_branch, "Prune spurs shorter than this [m]")->capture_default_str();
    app->add_option("--min-clearance", min_clearance, "Prune spurs ending below this clearance [m] (default: robot radius)");
  }
  fs::path map_path() const { return map.empty() ? bundled_data_dir() / "facility.pgm" : fs::path(map); }
  fs::path meta_path() const { return meta.empty() ? bundled_data_dir() / "facility.yaml" : fs::path(meta); }
  fs::path sites_path() const { return sites.empty() ? bundled_data_dir() / "facility_sites.csv" : fs::path(sites); }
  MapBuildOptions options() const {
    MapBuildOptions o;
    o.robot_radius = robot_radius;
    o.prune.min_branch_length = min_branch;
    o.prune.min_clearance = min_clearance.value_or(robot_radius);
    return o;
  }
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stoi(cur));
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  return out;
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_text_file(path, content);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological mapping and tour planning toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--speed", g.speed, "Robot speed [m/s]")->capture_default_str();
  app.add_option("--dwell-default", g.dwell_default, "Dwell for sites without one [s]")->capture_default_str();

  // map
  auto* map_cmd = app.add_subcommand("map", "Occupancy grids and skeleton graphs");
  map_cmd->require_subcommand(1);

  MapArgs build_args;
  std::string graph_out;
  auto* map_build = map_cmd->add_subcommand("build", "Build the skeleton graph of a map");
  build_args.add(map_build, false);
  map_build->add_option("--out", graph_out, "Graph dump path ('-' for stdout)");
  map_build->callback([&] {
    const auto t0 = std::chrono::steady_clock::now();
    const OccupancyGrid grid = load_grid_files(build_args.map_path(), build_args.meta_path());
    const MapBuildResult r = build_map(grid, build_args.options());
    write_or_print(graph_out, format_graph(r.graph));
    std::fprintf(stderr, "%zu nodes, %zu edges, %d components, %.3f s\n", r.graph.nodes.size(), r.graph.edges.size(),
                 r.graph.component_count(), seconds_since(t0));
  });

  std::string synth_kind = "facility", synth_map, synth_meta;
  auto* map_synth = map_cmd->add_subcommand("synth", "Write a synthetic map and its metadata");
  map_synth->add_option("--kind", synth_kind, "facility | plus | corridor | annulus")->capture_default_str();
  map_synth->add_option("--out-map", synth_map, "PGM output")->required();
  map_synth->add_option("--out-meta", synth_meta, "Metadata output")->required();
  map_synth->callback([&] {
    OccupancyGrid grid = synth_kind == "facility" ? synthetic::facility_map()
                         : synth_kind == "plus"   ? synthetic::plus_map()
                         : synth_kind == "corridor" ? synthetic::corridor_map(200, 9, 0.05)
                         : synth_kind == "annulus"  ? synthetic::annulus_map()
                                                    : throw Error("unknown map kind '" + synth_kind + "'");
    MapMetadata meta;
    meta.resolution = grid.resolution();
    meta.origin_x = grid.origin().x;
    meta.origin_y = grid.origin().y;
    write_text_file(synth_map, encode_pgm(grid));
    write_text_file(synth_meta, encode_map_metadata(meta));
  });

  // route
  auto* route_cmd = app.add_subcommand("route", "Travel-time matrices and planner benchmark");
  route_cmd->require_subcommand(1);

  MapArgs bench_args;
  std::string bench_nodes = "20,30,40,50", bench_out, bench_plot;
  std::uint64_t bench_seed = 1;
  auto* route_bench = route_cmd->add_subcommand("bench", "Time graph vs grid A* all-pairs matrices");
  bench_args.add(route_bench, true);
  route_bench->add_option("--nodes", bench_nodes, "Comma-separated node counts")->capture_default_str();
  route_bench->add_option("--seed", bench_seed, "Seed for random sites")->capture_default_str();
  route_bench->add_option("--out", bench_out, "Report CSV ('-' for stdout)");
  route_bench->add_option("--plot", bench_plot, "Runtime bar chart (SVG)");
  route_bench->callback([&] {
    const OccupancyGrid grid = load_grid_files(bench_args.map_path(), bench_args.meta_path());
    const auto t0 = std::chrono::steady_clock::now();
    const MapBuildResult r = build_map(grid, bench_args.options());
    std::fprintf(stderr, "graph built in %.3f s (not included in timings); timings are single-threaded\n",
                 seconds_since(t0));
    const SiteSet sites = parse_sites(read_text_file(bench_args.sites_path()), g.dwell_default);
    const RouteBenchReport report =
        bench_matrix_runtimes(r.inflated, r.graph, sites.depot, parse_int_list(bench_nodes), bench_seed, g.speed);
    write_or_print(bench_out, format_bench_report(report));
    if (!bench_plot.empty()) write_plot(bench_plot, svg_runtime_bars(report));
  });

  MapArgs matrix_args;
  std::string matrix_backend = "graph", matrix_out;
  bool matrix_serial = false;
  auto* route_matrix = route_cmd->add_subcommand("matrix", "Travel-time matrix for a site file");
  matrix_args.add(route_matrix, true);
  route_matrix->add_option("--backend", matrix_backend, "graph | grid")->capture_default_str();
  route_matrix->add_option("--out", matrix_out, "Matrix output ('-' for stdout)");
  route_matrix->add_flag("--serial", matrix_serial, "Disable parallel path queries");
  route_matrix->callback([&] {
    const OccupancyGrid grid = load_grid_files(matrix_args.map_path(), matrix_args.meta_path());
    const MapBuildResult r = build_map(grid, matrix_args.options());
    const SiteSet sites = parse_sites(read_text_file(matrix_args.sites_path()), g.dwell_default);
    const TravelTimeMatrix m =
        build_travel_matrix(r.graph, r.inflated, sites.aois, sites.depot, g.speed, parse_backend(matrix_backend),
                            matrix_serial ? Execution::Serial : Execution::Parallel);
    write_or_print(matrix_out, format_matrix(m));
  });

  // tour
  auto* tour_cmd = app.add_subcommand("tour", "Solve and check tour problems");
  tour_cmd->require_subcommand(1);

  std::string solve_scenario, solve_planner = "optimal", solve_out, solve_model;
  auto* tour_solve = tour_cmd->add_subcommand("solve", "Plan a tour for a scenario");
  tour_solve->add_option("--scenario", solve_scenario, "Scenario file")->required();
  tour_solve->add_option("--planner", solve_planner, "optimal | greedy-time | greedy-demand | unconstrained")
      ->capture_default_str();
  tour_solve->add_option("--out", solve_out, "Solution output ('-' for stdout)");
  tour_solve->add_option("--model", solve_model, "Also write the LP-style model listing here");
  tour_solve->callback([&] {
    const TourProblem p = load_scenario(solve_scenario);
    if (!solve_model.empty()) write_text_file(solve_model, dump_model(build_model(p), p));
    const Planner planner = parse_planner(solve_planner);
    if (planner == Planner::Optimal) {
      const auto [s, report] = solve_optimal(p);
      write_or_print(solve_out, format_solution(s, to_string(planner), &report));
      std::fprintf(stderr, "solved in %.3f s\n", report.wall_time);
    } else {
      write_or_print(solve_out, format_solution(run_planner(planner, p), to_string(planner)));
    }
  });

  std::string val_scenario, val_solution;
  auto* tour_validate = tour_cmd->add_subcommand("validate", "Check a solution against every constraint");
  tour_validate->add_option("--scenario", val_scenario, "Scenario file")->required();
  tour_validate->add_option("--solution", val_solution, "Solution file")->required();
  int validate_status = 0;
  tour_validate->callback([&] {
    const TourProblem p = load_scenario(val_scenario);
    const auto v = validate_solution(p, parse_solution(read_text_file(val_solution)));
    if (v.empty()) {
      std::cout << "feasible\n";
    } else {
      std::cout << format_violations(v);
      validate_status = 1;
    }
  });

  // scenario
  MapArgs scen_args;
  int scen_clients = 10;
  double scen_sigma = 1.0, scen_tlim = 800.0;
  std::uint64_t scen_seed = 1;
  std::vector<std::string> scen_seq;
  std::string scen_out, scen_matrix_file;
  auto* scen_cmd = app.add_subcommand("scenario", "Generate scenario files");
  scen_cmd->require_subcommand(1);
  auto* scen_make = scen_cmd->add_subcommand("make", "Scenario from a map, site file and sampled demand");
  scen_args.add(scen_make, true);
  scen_make->add_option("--clients", scen_clients, "Client count")->capture_default_str();
  scen_make->add_option("--sigma", scen_sigma, "Popularity deviation")->capture_default_str();
  scen_make->add_option("--seed", scen_seed, "Demand seed")->capture_default_str();
  scen_make->add_option("--tlim", scen_tlim, "Time limit [s]")->capture_default_str();
  scen_make->add_option("--seq", scen_seq, "Sequence pair i,j (repeatable)");
  scen_make->add_option("--out", scen_out, "Scenario output ('-' for stdout)");
  scen_make->callback([&] {
    const OccupancyGrid grid = load_grid_files(scen_args.map_path(), scen_args.meta_path());
    const MapBuildResult r = build_map(grid, scen_args.options());
    const SiteSet sites = parse_sites(read_text_file(scen_args.sites_path()), g.dwell_default);
    const TravelTimeMatrix m =
        build_travel_matrix(r.graph, r.inflated, sites.aois, sites.depot, g.speed, RouteBackend::Graph);
    std::vector<double> dwell;
    std::vector<int> ranks;
    for (const auto& a : sites.aois) {
      dwell.push_back(a.dwell);
      ranks.push_back(a.popularity_rank);
    }
    DemandMatrix d = sample_demands(scen_clients, aois_by_rank(ranks), scen_sigma, scen_seed);
    std::vector<std::pair<int, int>> seq;
    for (const auto& s : scen_seq) {
      const auto v = parse_int_list(s);
      if (v.size() != 2) throw Error("--seq expects i,j");
      seq.emplace_back(v[0], v[1]);
    }
    TourProblem p = make_problem(m, dwell, std::move(d), scen_tlim, seq, ranks);
    check_problem(p);
    write_or_print(scen_out, format_scenario(p));
  });

  // demand
  auto* demand_cmd = app.add_subcommand("demand", "Client demand sampling");
  demand_cmd->require_subcommand(1);
  int dem_clients = 10, dem_n = 20;
  double dem_sigma = 1.0;
  std::uint64_t dem_seed = 1;
  std::string dem_out;
  auto* demand_sample = demand_cmd->add_subcommand("sample", "Sample a demand file (site ids = rank + 1)");
  demand_sample->add_option("--clients", dem_clients, "Client count")->capture_default_str();
  demand_sample->add_option("--n", dem_n, "AOI count")->capture_default_str();
  demand_sample->add_option("--sigma", dem_sigma, "Popularity deviation")->capture_default_str();
  demand_sample->add_option("--seed", dem_seed, "Seed")->capture_default_str();
  demand_sample->add_option("--out", dem_out, "Output ('-' for stdout)");
  demand_sample->callback([&] {
    write_or_print(dem_out, format_demands(sample_demands(dem_clients, dem_n, dem_sigma, dem_seed)));
  });
  auto* demand_pmf = demand_cmd->add_subcommand("pmf", "Print the popularity pmf");
  demand_pmf->add_option("--n", dem_n, "AOI count")->capture_default_str();
  demand_pmf->add_option("--sigma", dem_sigma, "Popularity deviation")->capture_default_str();
  demand_pmf->callback([&] {
    const auto p = popularity_pmf(dem_n, dem_sigma);
    for (std::size_t k = 0; k < p.size(); ++k) std::printf("%zu %.12f\n", k, p[k]);
  });

  // exp
  auto* exp_cmd = app.add_subcommand("exp", "Experiment harness");
  exp_cmd->require_subcommand(1);
  ExperimentConfig cfg;
  MapArgs exp_args;
  std::string exp_out, exp_plot, exp_bins = "5,10,15,20,25,30", exp_planners;
  bool exp_serial = false;
  int tour_max_demand = 30;

  auto setup_config = [&](const std::string& default_planners) {
    cfg.map_image = exp_args.map.empty() ? fs::path() : fs::path(exp_args.map);
    cfg.map_meta = exp_args.meta.empty() ? fs::path() : fs::path(exp_args.meta);
    cfg.sites_file = exp_args.sites.empty() ? fs::path() : fs::path(exp_args.sites);
    cfg.map_options = exp_args.options();
    cfg.speed = g.speed;
    cfg.dwell_default = g.dwell_default;
    cfg.bin_edges = parse_int_list(exp_bins);
    cfg.exec = exp_serial ? Execution::Serial : Execution::Parallel;
    cfg.planners.clear();
    std::string list = exp_planners.empty() ? default_planners : exp_planners;
    std::string cur;
    for (char c : list + ",") {
      if (c == ',') {
        if (!cur.empty()) cfg.planners.push_back(parse_planner(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
  };
  auto add_exp_options = [&](CLI::App* cmd) {
    exp_args.add(cmd, true);
    cmd->add_option("--tlim", cfg.t_lim, "Time limit [s]")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    cmd->add_option("--out", exp_out, "CSV output ('-' for stdout)");
    cmd->add_option("--plot", exp_plot, "SVG plot output");
    cmd->add_option("--planners", exp_planners, "Comma-separated planners");
    cmd->add_flag("--serial", exp_serial, "Run instances one at a time");
    cmd->add_flag("--wall-time", cfg.record_wall_time, "Record planner wall times (CSV no longer byte-stable)");
  };

  auto* exp_drop = exp_cmd->add_subcommand("drop-rate", "Drop rate per total-demand bin");
  add_exp_options(exp_drop);
  exp_drop->add_option("--sigma", cfg.sigma, "Popularity deviation")->capture_default_str();
  exp_drop->add_option("--runs", cfg.runs, "Runs per bin")->capture_default_str();
  exp_drop->add_option("--bins", exp_bins, "Bin edges")->capture_default_str();
  exp_drop->callback([&] {
    setup_config("optimal,greedy-time,greedy-demand");
    const auto records = exp_drop_rate(cfg);
    write_or_print(exp_out, format_csv(records));
    if (!exp_plot.empty()) {
      char title[64];
      std::snprintf(title, sizeof title, "Demand drop rate, sigma = %g", cfg.sigma);
      write_plot(exp_plot, svg_drop_rate_box(records, cfg.bin_edges, title));
    }
  });

  auto* exp_tour = exp_cmd->add_subcommand("tour-time", "Tour time against total demand");
  add_exp_options(exp_tour);
  exp_tour->add_option("--sigmas", cfg.sweep_sigmas, "Deviations drawn per sampling attempt")
      ->delimiter(',')
      ->capture_default_str();
  int tour_runs = 5;
  exp_tour->add_option("--runs", tour_runs, "Runs per demand value")->capture_default_str();
  exp_tour->add_option("--max-demand", tour_max_demand, "Largest total demand")->capture_default_str();
  exp_tour->callback([&] {
    setup_config("optimal,greedy-time,greedy-demand,unconstrained");
    cfg.runs = tour_runs;
    const auto records = exp_tour_time(cfg, tour_max_demand);
    write_or_print(exp_out, format_csv(records));
    if (!exp_plot.empty()) write_plot(exp_plot, svg_tour_time_line(records, cfg.t_lim));
  });

  // plot
  std::string plot_kind, plot_in, plot_out, plot_bins = "5,10,15,20,25,30", plot_sigmas = "1,5";
  double plot_tlim = 800.0;
  int plot_n = 20;
  auto* plot_cmd = app.add_subcommand("plot", "Render an SVG from CSV output");
  plot_cmd->add_option("--kind", plot_kind, "drop_rate_box | tour_time_line | runtime_bars | demand_pmf")->required();
  plot_cmd->add_option("--in", plot_in, "Experiment or bench CSV");
  plot_cmd->add_option("--out", plot_out, "SVG output")->required();
  plot_cmd->add_option("--bins", plot_bins, "Bin edges (drop_rate_box)")->capture_default_str();
  plot_cmd->add_option("--tlim", plot_tlim, "Time limit line (tour_time_line)")->capture_default_str();
  plot_cmd->add_option("--n", plot_n, "AOI count (demand_pmf)")->capture_default_str();
  plot_cmd->add_option("--sigmas", plot_sigmas, "Deviations (demand_pmf)")->capture_default_str();
  plot_cmd->callback([&] {
    const PlotKind kind = parse_plot_kind(plot_kind);
    if (kind == PlotKind::DemandPmf) {
      std::vector<double> sigmas;
      std::string cur;
      for (char c : plot_sigmas + ",") {
        if (c == ',') {
          if (!cur.empty()) sigmas.push_back(std::stod(cur));
          cur.clear();
        } else {
          cur.push_back(c);
        }
      }
      write_plot(plot_out, svg_demand_pmf(plot_n, sigmas));
      return;
    }
    if (plot_in.empty()) throw Error("--in is required for this plot kind");
    const std::string csv = read_text_file(plot_in);
    if (kind == PlotKind::RuntimeBars) {
      RouteBenchReport report;
      std::istringstream in(csv);
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        RouteBenchRow row;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf", &row.nodes, &row.grid_s, &row.graph_s, &row.improvement_pct) != 4)
          throw Error("bad bench row '" + line + "'");
        report.rows.push_back(row);
      }
      write_plot(plot_out, svg_runtime_bars(report));
    } else if (kind == PlotKind::DropRateBox) {
      write_plot(plot_out, svg_drop_rate_box(parse_csv(csv), parse_int_list(plot_bins)));
    } else {
      write_plot(plot_out, svg_tour_time_line(parse_csv(csv), plot_tlim));
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return validate_status;
}
