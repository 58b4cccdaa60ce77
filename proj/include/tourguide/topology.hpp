#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tourguide/clearance.hpp"
#include "tourguide/grid.hpp"
#include "tourguide/skeleton.hpp"

namespace tourguide {

enum class NodeKind { Place, DecisionPoint };

const char* to_string(NodeKind kind);

struct SkeletonNode {
  int id = 0;
  std::size_t cell = 0;  // row-major cell index
  double clearance = 0.0;
  NodeKind kind = NodeKind::Place;
  // Inserted to split a loop that has no junction or tip.
  bool artificial = false;
  int component = 0;
};

// Pathway between two nodes. The polyline runs from node `a`'s cell to node
// `b`'s cell through 8-adjacent skeleton cells; a <= b.
struct SkeletonEdge {
  int a = 0;
  int b = 0;
  std::vector<std::size_t> polyline;
  double length = 0.0;
};

struct SkeletonGraph {
  int width = 0;
  int height = 0;
  double resolution = 1.0;
  Point2 origin{};
  std::vector<SkeletonNode> nodes;
  std::vector<SkeletonEdge> edges;

  // Number of edge endpoints at the node; a self-loop counts twice.
  int degree(int node) const;
  // Edge ids incident to each node, ascending.
  std::vector<std::vector<int>> incidence() const;
  Point2 cell_center(std::size_t cell) const;
  int component_count() const;
};

// Nodes at skeleton cells of degree != 2 (adjacent junction cells merge into
// one node placed at the cluster's highest-clearance cell); maximal degree-2
// chains become edges. Pure loops get one artificial DecisionPoint at their
// lowest-index cell. Node and edge order is a function of cell indices only.
SkeletonGraph build_topology(const Skeleton& skeleton, const ClearanceField& clearance,
                             Point2 origin = {});

// `node id x_m y_m kind clearance_m` and `edge id_a id_b length_m n_cells`.
std::string format_graph(const SkeletonGraph& graph);

struct MapBuildOptions {
  double robot_radius = 0.2;
  PruneOptions prune{0.5, 0.2};
};

struct MapBuildResult {
  OccupancyGrid inflated;
  ClearanceField clearance;
  Skeleton raw_skeleton;
  Skeleton skeleton;
  SkeletonGraph graph;
};

// inflate -> clearance -> extract -> prune -> topology.
MapBuildResult build_map(const OccupancyGrid& grid, const MapBuildOptions& options,
                         Execution exec = Execution::Parallel);

}  // namespace tourguide
