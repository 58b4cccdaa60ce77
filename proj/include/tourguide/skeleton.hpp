#pragma once

#include <cstdint>
#include <vector>

#include "tourguide/clearance.hpp"
#include "tourguide/grid.hpp"

namespace tourguide {

// Set of skeleton cells over a grid raster.
class Skeleton {
 public:
  Skeleton() = default;
  Skeleton(int width, int height) : width_(width), height_(height),
      mask_(static_cast<std::size_t>(width) * height, 0) {}

  int width() const { return width_; }
  int height() const { return height_; }

  bool contains(std::size_t idx) const { return mask_[idx] != 0; }
  bool contains(int col, int row) const {
    return col >= 0 && row >= 0 && col < width_ && row < height_ &&
           mask_[static_cast<std::size_t>(row) * width_ + col] != 0;
  }
  void insert(std::size_t idx) { mask_[idx] = 1; }
  void erase(std::size_t idx) { mask_[idx] = 0; }

  std::size_t count() const;
  // Cell indices in ascending order.
  std::vector<std::size_t> cells() const;
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  friend bool operator==(const Skeleton&, const Skeleton&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> mask_;
};

// Topological neighbours used for degree and graph tracing: all 4-neighbours
// in the set, plus diagonal neighbours not already reachable through a shared
// 4-neighbour. Connectivity is identical to plain 8-connectivity.
std::vector<std::size_t> skeleton_neighbors(const Skeleton& sk, std::size_t idx);
int skeleton_degree(const Skeleton& sk, std::size_t idx);

// Removing `idx` from `fg` preserves the topology (8-connected foreground,
// 4-connected background). Cells outside the raster count as background.
bool is_simple_point(const std::vector<std::uint8_t>& fg, int width, int height,
                     std::size_t idx);

// 8-connected component label per cell (-1 outside the set), labels assigned
// in ascending order of each component's first cell.
std::vector<int> skeleton_components(const Skeleton& sk);

// Distance-ordered homotopic thinning anchored on medial-axis cells of the
// clearance field, followed by a final thinning sweep to one-cell width.
Skeleton extract_skeleton(const OccupancyGrid& grid, const ClearanceField& clearance);

struct PruneOptions {
  double min_branch_length = 0.5;  // meters
  double min_clearance = 0.0;      // meters; usually the robot radius
};

// Repeatedly strips leaf branches (endpoint up to the first junction) that are
// shorter than min_branch_length or whose tip clearance is below
// min_clearance. Isolated paths are never removed.
Skeleton prune_skeleton(const Skeleton& skeleton, const ClearanceField& clearance,
                        const PruneOptions& options);

// Step cost between two 8-adjacent cells: resolution or resolution * sqrt(2).
double step_cost(std::size_t a, std::size_t b, int width, double resolution);

}  // namespace tourguide
