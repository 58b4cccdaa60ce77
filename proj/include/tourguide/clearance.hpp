#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "tourguide/execution.hpp"
#include "tourguide/grid.hpp"

namespace tourguide {

// Per-cell Euclidean distance (meters, cell center to cell center) to the
// nearest Occupied or Unknown cell. Zero on non-Free cells; +inf when the grid
// has no obstacle at all. Cells outside the grid are not obstacles.
class ClearanceField {
 public:
  ClearanceField() = default;
  ClearanceField(int width, int height, double resolution,
                 std::vector<std::int64_t> squared_cells);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }

  double at(std::size_t idx) const { return meters_[idx]; }
  double at(int col, int row) const {
    return meters_[static_cast<std::size_t>(row) * width_ + col];
  }
  // Exact squared distance in cell units; kNoObstacle when unbounded.
  std::int64_t squared_cells(std::size_t idx) const { return squared_[idx]; }

  const std::vector<double>& values() const { return meters_; }

  static constexpr std::int64_t kNoObstacle = std::numeric_limits<std::int64_t>::max();

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  std::vector<std::int64_t> squared_;
  std::vector<double> meters_;
};

// Exact separable Euclidean distance transform (lower envelope of parabolas,
// one pass per column then one per row).
ClearanceField compute_clearance(const OccupancyGrid& grid,
                                 Execution exec = Execution::Parallel);

inline ClearanceField compute_clearance_serial(const OccupancyGrid& grid) {
  return compute_clearance(grid, Execution::Serial);
}

}  // namespace tourguide
