#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tourguide/execution.hpp"
#include "tourguide/grid.hpp"
#include "tourguide/topology.hpp"

namespace tourguide {

class NoRouteError : public Error {
 public:
  NoRouteError() : Error("no route") {}
};

class UnanchorableError : public Error {
 public:
  explicit UnanchorableError(int aoi_id)
      : Error("unanchorable AOI " + std::to_string(aoi_id)), aoi_id_(aoi_id) {}
  int aoi_id() const { return aoi_id_; }

 private:
  int aoi_id_;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // carried as metadata only
};

struct Aoi {
  int id = 0;
  Pose pose;
  double dwell = 30.0;  // seconds, > 0
  int popularity_rank = 0;
  std::string label;
};

// An AOI tied to the skeleton through a straight, obstacle-free connector.
struct AnchoredSite {
  int aoi_id = 0;
  std::size_t pose_cell = 0;
  std::size_t anchor_cell = 0;
  // Cells of the straight walk from the pose cell to the anchor, inclusive.
  std::vector<std::size_t> stub;
  // Sum of 8-connected step costs along `stub`, meters.
  double stub_length = 0.0;
};

struct Route {
  std::vector<std::size_t> cells;
  double length = 0.0;  // meters
};

// 8-connected straight walk (Bresenham) between two cells, inclusive.
std::vector<std::size_t> line_cells(const OccupancyGrid& grid, Cell from, Cell to);
double path_length(const std::vector<std::size_t>& cells, int width, double resolution);

// Query structure over a skeleton graph and the inflated grid it came from.
// Immutable after construction; safe to share across threads.
class GraphRouter {
 public:
  GraphRouter(const SkeletonGraph& graph, const OccupancyGrid& grid);

  const SkeletonGraph& graph() const { return *graph_; }
  const OccupancyGrid& grid() const { return *grid_; }

  // Nearest line-of-sight skeleton cell (ties: lowest cell index).
  AnchoredSite anchor(const Aoi& aoi) const;
  AnchoredSite anchor(const Pose& pose, int id = -1) const;

  // Shortest skeleton distance between anchor cells, +inf across components.
  double anchor_distance(std::size_t from_cell, std::size_t to_cell) const;

  // stub_a + skeleton path + stub_b; zero for coincident pose cells.
  Route shortest_path(const AnchoredSite& a, const AnchoredSite& b) const;

  // Distances from one anchor to each of `targets` (one Dijkstra), including
  // stubs. Unreachable entries are +inf.
  std::vector<double> distances_from(const AnchoredSite& source,
                                     const std::vector<AnchoredSite>& targets) const;

  // Cells that lie on the graph (node cells and polyline cells), ascending.
  const std::vector<std::size_t>& graph_cells() const { return graph_cells_; }

 private:
  struct Position {
    int node = -1;   // >= 0 when the cell is a node cell
    int edge = -1;   // otherwise the first edge whose polyline holds it
    int index = 0;   // index within the polyline
    double offset = 0.0;  // arc length from polyline start
  };
  struct Seed {
    int node;
    double dist;
  };

  std::vector<Seed> seeds(std::size_t cell) const;
  std::vector<double> dijkstra(const std::vector<Seed>& sources, std::vector<int>* via_edge) const;
  const Position& position(std::size_t cell) const;

  const SkeletonGraph* graph_;
  const OccupancyGrid* grid_;
  std::vector<int> position_index_;  // per grid cell, -1 when off-graph
  std::vector<Position> positions_;
  std::vector<std::size_t> graph_cells_;
  std::vector<std::vector<int>> incidence_;
};

AnchoredSite anchor_aoi(const SkeletonGraph& graph, const OccupancyGrid& grid, const Aoi& aoi);
Route graph_shortest_path(const SkeletonGraph& graph, const OccupancyGrid& grid,
                          const AnchoredSite& a, const AnchoredSite& b);

// Reusable A* buffers; one per thread.
class AStarWorkspace {
 public:
  std::optional<Route> search(const OccupancyGrid& grid, Cell start, Cell goal);
  std::size_t expanded() const { return expanded_; }

 private:
  std::vector<double> g_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint8_t> closed_;
  std::uint32_t generation_ = 0;
  std::size_t expanded_ = 0;
};

// Optimal 8-connected grid path under step costs {res, res*sqrt(2)} with the
// Euclidean heuristic. Throws NoRouteError.
Route grid_astar(const OccupancyGrid& grid, const Pose& start, const Pose& goal);
Route grid_astar(const OccupancyGrid& grid, Cell start, Cell goal);

enum class RouteBackend { Graph, GridAstar };
const char* to_string(RouteBackend backend);
RouteBackend parse_backend(std::string_view text);

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Symmetric travel times in seconds; index 0 is the depot.
struct TravelTimeMatrix {
  int n = 0;
  double speed = 0.5;  // m/s
  RouteBackend backend = RouteBackend::Graph;
  std::vector<double> seconds;  // row-major n*n

  double at(int i, int j) const { return seconds[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return seconds[static_cast<std::size_t>(i) * n + j]; }
};

inline constexpr double kDefaultSpeed = 0.5;

TravelTimeMatrix build_travel_matrix(const SkeletonGraph& graph, const OccupancyGrid& grid,
                                     const std::vector<Aoi>& aois, const Pose& depot,
                                     double speed, RouteBackend backend,
                                     Execution exec = Execution::Parallel);

// Same, reusing an existing router.
TravelTimeMatrix build_travel_matrix(const GraphRouter& router, const std::vector<Aoi>& aois,
                                     const Pose& depot, double speed, RouteBackend backend,
                                     Execution exec = Execution::Parallel);

// Text formats. AOI records: `id, x_m, y_m, heading_rad, dwell_s,
// popularity_rank, label`; an empty dwell takes `default_dwell`.
std::vector<Aoi> parse_aois(std::string_view content, double default_dwell = 30.0);

// A site file: record id 0 is the depot, ids 1..N are the AOIs in order and
// their popularity ranks form a permutation of 0..N-1.
struct SiteSet {
  Pose depot;
  std::vector<Aoi> aois;
};
SiteSet parse_sites(std::string_view content, double default_dwell = 30.0);
std::string format_sites(const SiteSet& sites);
std::string format_aois(const std::vector<Aoi>& aois);
std::string format_matrix(const TravelTimeMatrix& m);
TravelTimeMatrix parse_matrix(std::string_view content);

}  // namespace tourguide
