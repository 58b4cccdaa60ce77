#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tourguide {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CellState : std::uint8_t { Free, Occupied, Unknown };

struct Cell {
  int col = 0;
  int row = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Row-major tri-state raster. Cell (col, row) covers
// [origin + col*res, origin + (col+1)*res) on x and likewise on y; image row
// 0 is grid row 0 (no vertical flip).
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution, Point2 origin = {},
                CellState fill = CellState::Free);
  OccupancyGrid(int width, int height, double resolution, Point2 origin,
                std::vector<CellState> cells);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Point2 origin() const { return origin_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(int col, int row) const {
    return col >= 0 && row >= 0 && col < width_ && row < height_;
  }
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }
  Cell cell_of(std::size_t idx) const {
    return {static_cast<int>(idx % width_), static_cast<int>(idx / width_)};
  }

  CellState at(int col, int row) const { return cells_[index(col, row)]; }
  CellState at(std::size_t idx) const { return cells_[idx]; }
  void set(int col, int row, CellState s) { cells_[index(col, row)] = s; }
  bool is_free(int col, int row) const {
    return in_bounds(col, row) && at(col, row) == CellState::Free;
  }

  const std::vector<CellState>& cells() const { return cells_; }

  Point2 cell_center(Cell c) const {
    return {origin_.x + (c.col + 0.5) * resolution_,
            origin_.y + (c.row + 0.5) * resolution_};
  }
  // Cell containing a metric point; may be out of bounds.
  Cell cell_at(Point2 p) const;

  std::size_t count(CellState s) const;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  Point2 origin_{};
  std::vector<CellState> cells_;
};

// Sidecar map metadata (map_server style keys).
struct MapMetadata {
  double resolution = 0.05;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double free_thresh = 0.196;
  double occupied_thresh = 0.65;
  bool negate = false;
};

struct GrayImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> pixels;
};

GrayImage parse_pgm(std::string_view content);
MapMetadata parse_map_metadata(std::string_view content);

OccupancyGrid load_grid(const GrayImage& image, const MapMetadata& meta);
OccupancyGrid load_grid(std::string_view pgm_content, std::string_view meta_content);
OccupancyGrid load_grid_files(const std::filesystem::path& pgm,
                              const std::filesystem::path& meta);

// Free -> 254, Occupied -> 0, Unknown -> 205 (binary P5).
std::string encode_pgm(const OccupancyGrid& grid);
std::string encode_map_metadata(const MapMetadata& meta);

// Free iff Free in `grid` and clearance > robot_radius. Unknown is an obstacle.
OccupancyGrid inflate_grid(const OccupancyGrid& grid, double robot_radius);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace tourguide
