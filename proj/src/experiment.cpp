#include "tourguide/experiment.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "tourguide/rng.hpp"

namespace tourguide {

std::filesystem::path bundled_data_dir() { return TOURGUIDE_DATA_DIR; }

std::vector<DemandBin> make_bins(const std::vector<int>& edges) {
  if (edges.size() < 2) throw Error("bins need at least two edges");
  std::vector<DemandBin> out;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    if (edges[k] >= edges[k + 1] || edges[k] < 1) throw Error("bin edges must be positive and increasing");
    out.push_back({edges[k], edges[k + 1], k + 2 == edges.size()});
  }
  return out;
}

ExperimentSetup load_setup(const ExperimentConfig& config) {
  const auto dir = bundled_data_dir();
  const auto image = config.map_image.empty() ? dir / "facility.pgm" : config.map_image;
  const auto meta = config.map_meta.empty() ? dir / "facility.yaml" : config.map_meta;
  const auto sites_file = config.sites_file.empty() ? dir / "facility_sites.csv" : config.sites_file;
  const OccupancyGrid grid = load_grid_files(image, meta);
  const MapBuildResult map = build_map(grid, config.map_options, config.exec);
  ExperimentSetup setup;
  setup.sites = parse_sites(read_text_file(sites_file), config.dwell_default);
  const GraphRouter router(map.graph, map.inflated);
  setup.matrix = build_travel_matrix(router, setup.sites.aois, setup.sites.depot, config.speed,
                                     RouteBackend::Graph, config.exec);
  for (const auto& a : setup.sites.aois) {
    setup.dwell.push_back(a.dwell);
    setup.popularity_rank.push_back(a.popularity_rank);
  }
  return setup;
}

namespace {

DemandMatrix sample_until(const ExperimentSetup& setup, const std::vector<double>& sigmas, const DemandBin& bin,
                          std::uint64_t seed) {
  if (sigmas.empty()) throw Error("no popularity deviation given");
  const std::vector<int> by_rank = aois_by_rank(setup.popularity_rank);
  const std::int64_t last = static_cast<std::int64_t>(sigmas.size()) - 1;
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxBinAttempts; ++attempt) {
    const double sigma = last == 0 ? sigmas[0] : sigmas[uniform_int(rng, 0, last)];
    const int clients = static_cast<int>(uniform_int(rng, 1, kMaxClients));
    DemandMatrix d = sample_demands(clients, by_rank, sigma, rng());
    if (bin.contains(d.total())) return d;
  }
  throw Error("no demand instance landed in bin [" + std::to_string(bin.lo) + ", " + std::to_string(bin.hi) +
              "] within " + std::to_string(kMaxBinAttempts) + " attempts");
}

}  // namespace

DemandMatrix sample_instance(const ExperimentSetup& setup, double sigma, const DemandBin& bin,
                             std::uint64_t seed) {
  return sample_until(setup, {sigma}, bin, seed);
}

DemandMatrix sample_instance(const ExperimentSetup& setup, const std::vector<double>& sigmas,
                             const DemandBin& bin, std::uint64_t seed) {
  return sample_until(setup, sigmas, bin, seed);
}

namespace {

std::vector<RunRecord> run_bins(const ExperimentConfig& config, const ExperimentSetup& setup,
                                const std::vector<DemandBin>& bins, const std::vector<double>& sigmas) {
  if (config.runs < 1) throw Error("runs must be at least 1");
  if (config.planners.empty()) throw Error("no planners selected");
  const int n_bins = static_cast<int>(bins.size());
  const int n_planners = static_cast<int>(config.planners.size());
  const int jobs = n_bins * config.runs;
  std::vector<RunRecord> records(static_cast<std::size_t>(jobs) * n_planners);
  std::vector<std::string> errors(jobs);
  const bool parallel = config.exec == Execution::Parallel;

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int job = 0; job < jobs; ++job) {
    const int b = job / config.runs;
    const int r = job % config.runs;
    const std::uint64_t seed =
        derive_seed(config.seed, {static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(r)});
    try {
      DemandMatrix demand = sample_instance(setup, sigmas, bins[b], seed);
      const TourProblem problem =
          make_problem(setup.matrix, setup.dwell, std::move(demand), config.t_lim, {}, setup.popularity_rank);
      const int total = problem.demand.total();
      for (int k = 0; k < n_planners; ++k) {
        const auto start = std::chrono::steady_clock::now();
        const TourSolution s = run_planner(config.planners[k], problem);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        RunRecord& rec = records[static_cast<std::size_t>(job) * n_planners + k];
        rec.run = job;
        rec.planner = config.planners[k];
        rec.total_demand = total;
        rec.dropped = s.dropped;
        rec.drop_rate = total > 0 ? static_cast<double>(s.dropped) / total : 0.0;
        rec.tour_time = s.total_time;
        rec.wall_time = config.record_wall_time ? wall : 0.0;
        rec.seed = seed;
        rec.bin = b;
      }
    } catch (const std::exception& e) {
      errors[job] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw Error(e);
  return records;
}

}  // namespace

std::vector<RunRecord> exp_drop_rate(const ExperimentConfig& config, const ExperimentSetup& setup) {
  return run_bins(config, setup, make_bins(config.bin_edges), {config.sigma});
}

std::vector<RunRecord> exp_drop_rate(const ExperimentConfig& config) {
  return exp_drop_rate(config, load_setup(config));
}

std::vector<RunRecord> exp_tour_time(const ExperimentConfig& config, const ExperimentSetup& setup, int max_total) {
  if (max_total < 1) throw Error("demand sweep needs a positive maximum");
  std::vector<DemandBin> bins;
  for (int t = 1; t <= max_total; ++t) bins.push_back({t, t, true});
  return run_bins(config, setup, bins, config.sweep_sigmas);
}

std::vector<RunRecord> exp_tour_time(const ExperimentConfig& config, int max_total) {
  return exp_tour_time(config, load_setup(config), max_total);
}

std::string format_csv(const std::vector<RunRecord>& records) {
  std::string out = "run,planner,total_demand,dropped,drop_rate,tour_time_s,wall_s,seed\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%d,%s,%d,%d,%.6f,%.6f,%.6f,%" PRIu64 "\n", r.run, to_string(r.planner),
                  r.total_demand, r.dropped, r.drop_rate, r.tour_time, r.wall_time, r.seed);
    out += buf;
  }
  return out;
}

void emit_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
  write_text_file(path, format_csv(records));
}

std::vector<RunRecord> parse_csv(std::string_view content) {
  std::vector<RunRecord> out;
  std::istringstream in{std::string(content)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw Error("CSV row needs 8 fields: '" + line + "'");
    RunRecord r;
    r.run = std::stoi(f[0]);
    r.planner = parse_planner(f[1]);
    r.total_demand = std::stoi(f[2]);
    r.dropped = std::stoi(f[3]);
    r.drop_rate = std::stod(f[4]);
    r.tour_time = std::stod(f[5]);
    r.wall_time = std::stod(f[6]);
    r.seed = std::stoull(f[7]);
    out.push_back(r);
  }
  return out;
}

}  // namespace tourguide
