#include "tourguide/grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tourguide/clearance.hpp"

namespace tourguide {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Point2 origin,
                             CellState fill)
    : OccupancyGrid(width, height, resolution, origin,
                    std::vector<CellState>(static_cast<std::size_t>(std::max(width, 0)) *
                                               static_cast<std::size_t>(std::max(height, 0)),
                                           fill)) {}

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Point2 origin,
                             std::vector<CellState> cells)
    : width_(width), height_(height), resolution_(resolution), origin_(origin),
      cells_(std::move(cells)) {
  if (width <= 0 || height <= 0) throw Error("grid dimensions must be positive");
  if (!(resolution > 0.0)) throw Error("grid resolution must be positive");
  if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw Error("grid cell count does not match width*height");
}

Cell OccupancyGrid::cell_at(Point2 p) const {
  return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
          static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
}

std::size_t OccupancyGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::string_view s) : s_(s) {}

  void skip_ws_and_comments() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int read_int() {
    skip_ws_and_comments();
    int v = 0;
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) throw Error("malformed PGM: expected integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  std::string_view rest() const { return s_.substr(pos_); }
  void advance(std::size_t n) { pos_ += n; }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

double parse_double(std::string_view text, std::string_view key) {
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw Error("metadata: bad numeric value for '" + std::string(key) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

GrayImage parse_pgm(std::string_view content) {
  if (content.size() < 2 || content[0] != 'P' || (content[1] != '2' && content[1] != '5'))
    throw Error("malformed PGM: missing P2/P5 magic");
  const bool binary = content[1] == '5';
  PgmReader r(content);
  r.advance(2);
  GrayImage img;
  img.width = r.read_int();
  img.height = r.read_int();
  img.maxval = r.read_int();
  if (img.width <= 0 || img.height <= 0) throw Error("malformed PGM: non-positive dimensions");
  if (img.maxval <= 0 || img.maxval > 65535) throw Error("malformed PGM: bad maxval");
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.resize(n);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    std::string_view rest = r.rest();
    if (rest.empty() || !std::isspace(static_cast<unsigned char>(rest[0])))
      throw Error("malformed PGM: missing raster separator");
    rest.remove_prefix(1);
    const std::size_t bpp = img.maxval > 255 ? 2 : 1;
    if (rest.size() < n * bpp) throw Error("malformed PGM: raster shorter than width*height");
    for (std::size_t i = 0; i < n; ++i) {
      const auto* p = reinterpret_cast<const unsigned char*>(rest.data()) + i * bpp;
      img.pixels[i] = bpp == 1 ? p[0] : static_cast<std::uint16_t>((p[0] << 8) | p[1]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const int v = r.read_int();
      if (v < 0 || v > img.maxval) throw Error("malformed PGM: pixel exceeds maxval");
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  }
  for (auto v : img.pixels)
    if (v > img.maxval) throw Error("malformed PGM: pixel exceeds maxval");
  return img;
}

MapMetadata parse_map_metadata(std::string_view content) {
  MapMetadata meta;
  bool have_resolution = false;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    std::string_view l = trim(line);
    if (auto hash = l.find('#'); hash != std::string_view::npos) l = trim(l.substr(0, hash));
    if (l.empty()) continue;
    const auto sep = l.find_first_of(":= \t");
    if (sep == std::string_view::npos) throw Error("metadata: malformed line '" + std::string(l) + "'");
    const std::string_view key = trim(l.substr(0, sep));
    std::string_view value = trim(l.substr(sep + 1));
    while (!value.empty() && (value.front() == ':' || value.front() == '=')) value = trim(value.substr(1));
    if (key == "resolution") {
      meta.resolution = parse_double(value, key);
      have_resolution = true;
    } else if (key == "origin_x") {
      meta.origin_x = parse_double(value, key);
    } else if (key == "origin_y") {
      meta.origin_y = parse_double(value, key);
    } else if (key == "free_thresh") {
      meta.free_thresh = parse_double(value, key);
    } else if (key == "occupied_thresh") {
      meta.occupied_thresh = parse_double(value, key);
    } else if (key == "negate") {
      meta.negate = parse_double(value, key) != 0.0;
    }
    // Unrecognised keys (image, mode, ...) are ignored.
  }
  if (!have_resolution) throw Error("metadata: missing 'resolution'");
  return meta;
}

OccupancyGrid load_grid(const GrayImage& image, const MapMetadata& meta) {
  if (!(meta.resolution > 0.0)) throw Error("metadata: resolution must be positive");
  if (!(meta.free_thresh >= 0.0 && meta.free_thresh < meta.occupied_thresh &&
        meta.occupied_thresh <= 1.0))
    throw Error("metadata: thresholds must satisfy 0 <= free_thresh < occupied_thresh <= 1");
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  if (image.width <= 0 || image.height <= 0 || image.pixels.size() != n)
    throw Error("image: inconsistent dimensions");
  std::vector<CellState> cells(n);
  const double maxval = image.maxval;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = image.pixels[i];
    const double p = meta.negate ? v / maxval : (maxval - v) / maxval;
    if (p > meta.occupied_thresh)
      cells[i] = CellState::Occupied;
    else if (p < meta.free_thresh)
      cells[i] = CellState::Free;
    else
      cells[i] = CellState::Unknown;
  }
  return OccupancyGrid(image.width, image.height, meta.resolution,
                       {meta.origin_x, meta.origin_y}, std::move(cells));
}

OccupancyGrid load_grid(std::string_view pgm_content, std::string_view meta_content) {
  return load_grid(parse_pgm(pgm_content), parse_map_metadata(meta_content));
}

OccupancyGrid load_grid_files(const std::filesystem::path& pgm,
                              const std::filesystem::path& meta) {
  return load_grid(read_text_file(pgm), read_text_file(meta));
}

std::string encode_pgm(const OccupancyGrid& grid) {
  std::string out = "P5\n" + std::to_string(grid.width()) + " " +
                    std::to_string(grid.height()) + "\n255\n";
  out.reserve(out.size() + grid.size());
  for (CellState s : grid.cells()) {
    switch (s) {
      case CellState::Free: out.push_back(static_cast<char>(254)); break;
      case CellState::Occupied: out.push_back(static_cast<char>(0)); break;
      case CellState::Unknown: out.push_back(static_cast<char>(205)); break;
    }
  }
  return out;
}

std::string encode_map_metadata(const MapMetadata& meta) {
  std::ostringstream os;
  os.precision(15);
  os << "resolution: " << meta.resolution << "\n"
     << "origin_x: " << meta.origin_x << "\n"
     << "origin_y: " << meta.origin_y << "\n"
     << "free_thresh: " << meta.free_thresh << "\n"
     << "occupied_thresh: " << meta.occupied_thresh << "\n"
     << "negate: " << (meta.negate ? 1 : 0) << "\n";
  return os.str();
}

OccupancyGrid inflate_grid(const OccupancyGrid& grid, double robot_radius) {
  if (!(robot_radius >= 0.0)) throw Error("robot radius must be non-negative");
  const ClearanceField clearance = compute_clearance(grid);
  std::vector<CellState> cells(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool keep = grid.at(i) == CellState::Free && clearance.at(i) > robot_radius;
    cells[i] = keep ? CellState::Free : CellState::Occupied;
  }
  return OccupancyGrid(grid.width(), grid.height(), grid.resolution(), grid.origin(),
                       std::move(cells));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace tourguide
