#pragma once

#include "tourguide/grid.hpp"

namespace tourguide::synthetic {

// Carves an axis-aligned block of cells [col0, col1) x [row0, row1).
void fill_cells(OccupancyGrid& grid, int col0, int row0, int col1, int row1, CellState s);

// Two crossing corridors of `corridor_width` cells, closed at the arm ends,
// on a fully occupied background.
OccupancyGrid plus_map(int size = 61, int corridor_width = 5, int margin = 5,
                       double resolution = 0.05);

// Horizontal corridor `length` cells long and `width` cells wide, walled in.
OccupancyGrid corridor_map(int length, int width, double resolution = 0.05);

// Square ring corridor: outer side `outer`, ring width `ring` cells.
OccupancyGrid annulus_map(int outer = 40, int ring = 8, double resolution = 0.05);

// 400 x 400 cells at 0.05 m: lobby with a pillar, four corridors, six rooms,
// a loop corridor and a patch of unmapped space.
OccupancyGrid facility_map();

}  // namespace tourguide::synthetic
