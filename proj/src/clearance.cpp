#include "tourguide/clearance.hpp"

#include <cmath>

namespace tourguide {

namespace {

constexpr std::int64_t kInf = ClearanceField::kNoObstacle;

// Vertical distance (cells) to the nearest obstacle in column `col`.
void column_pass(const OccupancyGrid& grid, int col, std::vector<std::int64_t>& g) {
  const int h = grid.height();
  const int w = grid.width();
  std::int64_t last = -1;
  for (int row = 0; row < h; ++row) {
    const std::size_t idx = static_cast<std::size_t>(row) * w + col;
    if (grid.at(idx) != CellState::Free) {
      g[idx] = 0;
      last = row;
    } else {
      g[idx] = last < 0 ? kInf : row - last;
    }
  }
  last = -1;
  for (int row = h - 1; row >= 0; --row) {
    const std::size_t idx = static_cast<std::size_t>(row) * w + col;
    if (g[idx] == 0) {
      last = row;
    } else if (last >= 0 && last - row < g[idx]) {
      g[idx] = last - row;
    }
  }
}

// Lower envelope of parabolas (c - q)^2 + g(q)^2 along one row; writes squared
// distances. `v` and `z` are scratch buffers sized width and width + 1.
void row_pass(int width, int row, const std::vector<std::int64_t>& g,
              std::vector<std::int64_t>& out, std::vector<int>& v, std::vector<double>& z) {
  const std::size_t base = static_cast<std::size_t>(row) * width;
  auto f = [&](int q) {
    const std::int64_t gq = g[base + q];
    return gq * gq;
  };
  int k = -1;
  for (int q = 0; q < width; ++q) {
    if (g[base + q] == kInf) continue;
    const double fq = static_cast<double>(f(q)) + static_cast<double>(q) * q;
    while (k >= 0) {
      const int p = v[k];
      const double fp = static_cast<double>(f(p)) + static_cast<double>(p) * p;
      const double s = (fq - fp) / (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
      } else {
        v[++k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
        break;
      }
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -std::numeric_limits<double>::infinity();
      z[1] = std::numeric_limits<double>::infinity();
    }
  }
  if (k < 0) {
    for (int c = 0; c < width; ++c) out[base + c] = kInf;
    return;
  }
  int j = 0;
  for (int c = 0; c < width; ++c) {
    while (z[j + 1] < c) ++j;
    const std::int64_t d = c - v[j];
    out[base + c] = d * d + f(v[j]);
  }
}

}  // namespace

ClearanceField::ClearanceField(int width, int height, double resolution,
                               std::vector<std::int64_t> squared_cells)
    : width_(width), height_(height), resolution_(resolution),
      squared_(std::move(squared_cells)), meters_(squared_.size()) {
  for (std::size_t i = 0; i < squared_.size(); ++i) {
    meters_[i] = squared_[i] == kNoObstacle
                     ? std::numeric_limits<double>::infinity()
                     : std::sqrt(static_cast<double>(squared_[i])) * resolution_;
  }
}

ClearanceField compute_clearance(const OccupancyGrid& grid, Execution exec) {
  const int w = grid.width();
  const int h = grid.height();
  std::vector<std::int64_t> g(grid.size());
  std::vector<std::int64_t> sq(grid.size());

  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (int col = 0; col < w; ++col) column_pass(grid, col, g);
#pragma omp parallel
    {
      std::vector<int> v(w);
      std::vector<double> z(w + 1);
#pragma omp for schedule(static)
      for (int row = 0; row < h; ++row) row_pass(w, row, g, sq, v, z);
    }
  } else {
    for (int col = 0; col < w; ++col) column_pass(grid, col, g);
    std::vector<int> v(w);
    std::vector<double> z(w + 1);
    for (int row = 0; row < h; ++row) row_pass(w, row, g, sq, v, z);
  }
  return ClearanceField(w, h, grid.resolution(), std::move(sq));
}

}  // namespace tourguide
