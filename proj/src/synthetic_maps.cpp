#include "tourguide/synthetic_maps.hpp"

#include <algorithm>
#include <cmath>

namespace tourguide::synthetic {

void fill_cells(OccupancyGrid& grid, int col0, int row0, int col1, int row1, CellState s) {
  col0 = std::max(col0, 0);
  row0 = std::max(row0, 0);
  col1 = std::min(col1, grid.width());
  row1 = std::min(row1, grid.height());
  for (int r = row0; r < row1; ++r)
    for (int c = col0; c < col1; ++c) grid.set(c, r, s);
}

OccupancyGrid plus_map(int size, int corridor_width, int margin, double resolution) {
  OccupancyGrid g(size, size, resolution, {}, CellState::Occupied);
  const int lo = (size - corridor_width) / 2;
  fill_cells(g, margin, lo, size - margin, lo + corridor_width, CellState::Free);
  fill_cells(g, lo, margin, lo + corridor_width, size - margin, CellState::Free);
  return g;
}

OccupancyGrid corridor_map(int length, int width, double resolution) {
  OccupancyGrid g(length + 2, width + 2, resolution, {}, CellState::Occupied);
  fill_cells(g, 1, 1, length + 1, width + 1, CellState::Free);
  return g;
}

OccupancyGrid annulus_map(int outer, int ring, double resolution) {
  OccupancyGrid g(outer + 2, outer + 2, resolution, {}, CellState::Occupied);
  fill_cells(g, 1, 1, outer + 1, outer + 1, CellState::Free);
  fill_cells(g, 1 + ring, 1 + ring, outer + 1 - ring, outer + 1 - ring, CellState::Occupied);
  return g;
}

OccupancyGrid facility_map() {
  constexpr double kRes = 0.05;
  OccupancyGrid g(400, 400, kRes, {}, CellState::Occupied);
  auto carve = [&](double x0, double y0, double x1, double y1, CellState s = CellState::Free) {
    fill_cells(g, static_cast<int>(std::lround(x0 / kRes)), static_cast<int>(std::lround(y0 / kRes)),
               static_cast<int>(std::lround(x1 / kRes)), static_cast<int>(std::lround(y1 / kRes)), s);
  };
  // Lobby and the four corridors leaving it.
  carve(7.5, 7.5, 12.5, 12.5);
  carve(1.0, 9.25, 7.5, 10.75);
  carve(12.5, 9.25, 19.0, 10.75);
  carve(9.25, 1.0, 10.75, 7.5);
  carve(9.25, 12.5, 10.75, 19.0);
  // Loop corridor around the north-east block.
  carve(10.75, 1.0, 19.0, 2.5);
  carve(17.5, 2.5, 19.0, 9.25);
  // North-west suite: outer room reached through the inner room.
  carve(1.0, 1.0, 6.5, 4.0);
  carve(3.0, 4.0, 4.0, 5.0);
  carve(1.0, 5.0, 6.5, 8.5);
  carve(3.0, 8.5, 4.0, 9.25);
  // North-east hall with doors to the north and east corridors.
  carve(11.5, 3.25, 16.75, 8.5);
  carve(10.75, 5.0, 11.5, 6.0);
  carve(14.0, 8.5, 15.0, 9.25);
  // South-west gallery with a pillar.
  carve(1.0, 11.5, 8.5, 19.0);
  carve(4.0, 10.75, 5.5, 11.5);
  carve(4.0, 14.5, 5.5, 16.0, CellState::Occupied);
  // South-east rooms.
  carve(11.5, 11.5, 19.0, 15.0);
  carve(16.0, 10.75, 17.0, 11.5);
  carve(11.5, 16.0, 19.0, 19.0);
  carve(10.75, 17.0, 11.5, 18.0);
  // Lobby pillar and an unmapped corner of the gallery.
  carve(9.5, 9.5, 10.5, 10.5, CellState::Occupied);
  carve(1.0, 18.0, 2.0, 19.0, CellState::Unknown);
  return g;
}

}  // namespace tourguide::synthetic
