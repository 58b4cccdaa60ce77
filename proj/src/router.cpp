#include "tourguide/router.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <queue>
#include <sstream>

#include "tourguide/skeleton.hpp"

namespace tourguide {

std::vector<std::size_t> line_cells(const OccupancyGrid& grid, Cell from, Cell to) {
  std::vector<std::size_t> out;
  int x = from.col;
  int y = from.row;
  const int dx = std::abs(to.col - from.col);
  const int dy = -std::abs(to.row - from.row);
  const int sx = from.col < to.col ? 1 : -1;
  const int sy = from.row < to.row ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    out.push_back(grid.index(x, y));
    if (x == to.col && y == to.row) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
  return out;
}

double path_length(const std::vector<std::size_t>& cells, int width, double resolution) {
  double len = 0.0;
  for (std::size_t k = 1; k < cells.size(); ++k)
    if (cells[k] != cells[k - 1]) len += step_cost(cells[k - 1], cells[k], width, resolution);
  return len;
}

namespace {

// Appends `tail` to `path`, dropping a duplicated junction cell.
void append_cells(std::vector<std::size_t>& path, const std::vector<std::size_t>& tail) {
  for (std::size_t c : tail)
    if (path.empty() || path.back() != c) path.push_back(c);
}

std::vector<std::size_t> slice(const std::vector<std::size_t>& poly, int from, int to) {
  std::vector<std::size_t> out;
  if (from <= to) {
    for (int k = from; k <= to; ++k) out.push_back(poly[k]);
  } else {
    for (int k = from; k >= to; --k) out.push_back(poly[k]);
  }
  return out;
}

}  // namespace

GraphRouter::GraphRouter(const SkeletonGraph& graph, const OccupancyGrid& grid)
    : graph_(&graph), grid_(&grid),
      position_index_(grid.size(), -1), incidence_(graph.incidence()) {
  if (graph.width != grid.width() || graph.height != grid.height())
    throw Error("graph and grid dimensions differ");
  for (const auto& node : graph.nodes) {
    position_index_[node.cell] = static_cast<int>(positions_.size());
    positions_.push_back({node.id, -1, 0, 0.0});
  }
  for (int e = 0; e < static_cast<int>(graph.edges.size()); ++e) {
    const auto& poly = graph.edges[e].polyline;
    double offset = 0.0;
    for (int k = 0; k < static_cast<int>(poly.size()); ++k) {
      if (k > 0) offset += step_cost(poly[k - 1], poly[k], graph.width, graph.resolution);
      if (position_index_[poly[k]] >= 0) continue;
      position_index_[poly[k]] = static_cast<int>(positions_.size());
      positions_.push_back({-1, e, k, offset});
    }
  }
  for (std::size_t c = 0; c < position_index_.size(); ++c)
    if (position_index_[c] >= 0) graph_cells_.push_back(c);
}

const GraphRouter::Position& GraphRouter::position(std::size_t cell) const {
  const int p = position_index_[cell];
  if (p < 0) throw Error("cell is not on the skeleton graph");
  return positions_[p];
}

std::vector<GraphRouter::Seed> GraphRouter::seeds(std::size_t cell) const {
  const Position& pos = position(cell);
  if (pos.node >= 0) return {{pos.node, 0.0}};
  const auto& e = graph_->edges[pos.edge];
  return {{e.a, pos.offset}, {e.b, e.length - pos.offset}};
}

std::vector<double> GraphRouter::dijkstra(const std::vector<Seed>& sources,
                                          std::vector<int>* via_edge) const {
  const std::size_t n = graph_->nodes.size();
  std::vector<double> dist(n, kUnreachable);
  if (via_edge) via_edge->assign(n, -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (const Seed& s : sources) {
    if (s.dist < dist[s.node]) {
      dist[s.node] = s.dist;
      heap.emplace(s.dist, s.node);
    }
  }
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (int e : incidence_[u]) {
      const auto& edge = graph_->edges[e];
      const int v = edge.a == u ? edge.b : edge.a;
      const double nd = d + edge.length;
      if (nd < dist[v]) {
        dist[v] = nd;
        if (via_edge) (*via_edge)[v] = e;
        heap.emplace(nd, v);
      }
    }
  }
  return dist;
}

AnchoredSite GraphRouter::anchor(const Aoi& aoi) const { return anchor(aoi.pose, aoi.id); }

AnchoredSite GraphRouter::anchor(const Pose& pose, int id) const {
  const OccupancyGrid& grid = *grid_;
  const Cell pc = grid.cell_at({pose.x, pose.y});
  if (!grid.is_free(pc.col, pc.row)) throw Error("AOI " + std::to_string(id) + " is not on a free cell");

  // Squared distance in cells^2 rounded to 1e-6, so geometric ties resolve by
  // cell index rather than by rounding noise.
  std::vector<std::pair<std::int64_t, std::size_t>> candidates;
  candidates.reserve(graph_cells_.size());
  const double inv_res = 1.0 / grid.resolution();
  for (std::size_t c : graph_cells_) {
    const Point2 p = grid.cell_center(grid.cell_of(c));
    const double dx = (p.x - pose.x) * inv_res;
    const double dy = (p.y - pose.y) * inv_res;
    candidates.emplace_back(std::llround((dx * dx + dy * dy) * 1e6), c);
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto& [d2, c] : candidates) {
    std::vector<std::size_t> walk = line_cells(grid, pc, grid.cell_of(c));
    const bool clear = std::all_of(walk.begin(), walk.end(),
                                   [&](std::size_t k) { return grid.at(k) == CellState::Free; });
    if (!clear) continue;
    AnchoredSite site;
    site.aoi_id = id;
    site.pose_cell = grid.index(pc.col, pc.row);
    site.anchor_cell = c;
    site.stub_length = path_length(walk, grid.width(), grid.resolution());
    site.stub = std::move(walk);
    return site;
  }
  throw UnanchorableError(id);
}

double GraphRouter::anchor_distance(std::size_t from_cell, std::size_t to_cell) const {
  if (from_cell == to_cell) return 0.0;
  const Position& pa = position(from_cell);
  const Position& pb = position(to_cell);
  const std::vector<double> dist = dijkstra(seeds(from_cell), nullptr);
  double best = kUnreachable;
  for (const Seed& s : seeds(to_cell)) best = std::min(best, dist[s.node] + s.dist);
  if (pa.edge >= 0 && pa.edge == pb.edge) best = std::min(best, std::abs(pa.offset - pb.offset));
  return best;
}

std::vector<double> GraphRouter::distances_from(const AnchoredSite& source,
                                                const std::vector<AnchoredSite>& targets) const {
  const std::vector<double> dist = dijkstra(seeds(source.anchor_cell), nullptr);
  const Position& ps = position(source.anchor_cell);
  std::vector<double> out(targets.size(), kUnreachable);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const AnchoredSite& t = targets[k];
    if (t.pose_cell == source.pose_cell) {
      out[k] = 0.0;
      continue;
    }
    double best = t.anchor_cell == source.anchor_cell ? 0.0 : kUnreachable;
    for (const Seed& s : seeds(t.anchor_cell)) best = std::min(best, dist[s.node] + s.dist);
    const Position& pt = position(t.anchor_cell);
    if (ps.edge >= 0 && ps.edge == pt.edge) best = std::min(best, std::abs(ps.offset - pt.offset));
    out[k] = best + source.stub_length + t.stub_length;
  }
  return out;
}

Route GraphRouter::shortest_path(const AnchoredSite& a, const AnchoredSite& b) const {
  if (a.pose_cell == b.pose_cell) return {{a.pose_cell}, 0.0};
  const SkeletonGraph& g = *graph_;
  const Position& pa = position(a.anchor_cell);
  const Position& pb = position(b.anchor_cell);

  std::vector<int> via;
  const std::vector<double> dist = dijkstra(seeds(a.anchor_cell), &via);

  double best = kUnreachable;
  int best_target = -1;  // -1: stay on the shared edge (or same cell)
  if (a.anchor_cell == b.anchor_cell) best = 0.0;
  if (pa.edge >= 0 && pa.edge == pb.edge) best = std::min(best, std::abs(pa.offset - pb.offset));
  const auto target_seeds = seeds(b.anchor_cell);
  for (std::size_t k = 0; k < target_seeds.size(); ++k) {
    const double d = dist[target_seeds[k].node] + target_seeds[k].dist;
    if (d < best) {
      best = d;
      best_target = static_cast<int>(k);
    }
  }
  if (!std::isfinite(best)) throw NoRouteError();

  Route route;
  append_cells(route.cells, a.stub);
  if (best_target < 0) {
    if (a.anchor_cell != b.anchor_cell)
      append_cells(route.cells, slice(g.edges[pa.edge].polyline, pa.index, pb.index));
  } else {
    const int t = target_seeds[best_target].node;
    // Walk back from the target node to the node seeded by the source anchor.
    std::vector<int> nodes{t};
    std::vector<int> edges;
    for (int v = t; via[v] >= 0;) {
      const auto& e = g.edges[via[v]];
      edges.push_back(via[v]);
      v = e.a == v ? e.b : e.a;
      nodes.push_back(v);
    }
    std::reverse(nodes.begin(), nodes.end());
    std::reverse(edges.begin(), edges.end());
    const int s = nodes.front();
    if (pa.node < 0) {
      const auto& e = g.edges[pa.edge];
      const int end = s == e.a ? 0 : static_cast<int>(e.polyline.size()) - 1;
      append_cells(route.cells, slice(e.polyline, pa.index, end));
    }
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto& e = g.edges[edges[k]];
      const int last = static_cast<int>(e.polyline.size()) - 1;
      if (e.a == nodes[k])
        append_cells(route.cells, slice(e.polyline, 0, last));
      else
        append_cells(route.cells, slice(e.polyline, last, 0));
    }
    if (pb.node < 0) {
      const auto& e = g.edges[pb.edge];
      const int start = t == e.a ? 0 : static_cast<int>(e.polyline.size()) - 1;
      append_cells(route.cells, slice(e.polyline, start, pb.index));
    } else {
      append_cells(route.cells, {g.nodes[pb.node].cell});
    }
  }
  std::vector<std::size_t> back(b.stub.rbegin(), b.stub.rend());
  append_cells(route.cells, back);
  route.length = a.stub_length + best + b.stub_length;
  return route;
}

AnchoredSite anchor_aoi(const SkeletonGraph& graph, const OccupancyGrid& grid, const Aoi& aoi) {
  return GraphRouter(graph, grid).anchor(aoi);
}

Route graph_shortest_path(const SkeletonGraph& graph, const OccupancyGrid& grid,
                          const AnchoredSite& a, const AnchoredSite& b) {
  return GraphRouter(graph, grid).shortest_path(a, b);
}

std::optional<Route> AStarWorkspace::search(const OccupancyGrid& grid, Cell start, Cell goal) {
  if (!grid.is_free(start.col, start.row) || !grid.is_free(goal.col, goal.row)) return std::nullopt;
  const std::size_t n = grid.size();
  if (g_.size() != n) {
    g_.assign(n, 0.0);
    parent_.assign(n, 0);
    stamp_.assign(n, 0);
    closed_.assign(n, 0);
    generation_ = 0;
  }
  if (++generation_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    generation_ = 1;
  }
  expanded_ = 0;
  const int w = grid.width();
  const double res = grid.resolution();
  const double diag = res * std::numbers::sqrt2;
  const std::size_t s = grid.index(start.col, start.row);
  const std::size_t t = grid.index(goal.col, goal.row);
  auto h = [&](std::size_t i) {
    const double dx = static_cast<double>(static_cast<int>(i % w) - goal.col);
    const double dy = static_cast<double>(static_cast<int>(i / w) - goal.row);
    return res * std::sqrt(dx * dx + dy * dy);
  };
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  stamp_[s] = generation_;
  closed_[s] = 0;
  g_[s] = 0.0;
  parent_[s] = static_cast<std::uint32_t>(s);
  open.emplace(h(s), static_cast<std::uint32_t>(s));
  while (!open.empty()) {
    const std::uint32_t u = open.top().second;
    open.pop();
    if (closed_[u]) continue;
    closed_[u] = 1;
    ++expanded_;
    if (u == t) break;
    const int uc = static_cast<int>(u % w);
    const int ur = static_cast<int>(u / w);
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const int vc = uc + dc;
        const int vr = ur + dr;
        if (!grid.is_free(vc, vr)) continue;
        const std::size_t v = grid.index(vc, vr);
        const double ng = g_[u] + ((dr != 0 && dc != 0) ? diag : res);
        if (stamp_[v] != generation_) {
          stamp_[v] = generation_;
          closed_[v] = 0;
        } else if (closed_[v] || ng >= g_[v]) {
          continue;
        }
        g_[v] = ng;
        parent_[v] = u;
        open.emplace(ng + h(v), static_cast<std::uint32_t>(v));
      }
    }
  }
  if (stamp_[t] != generation_ || !closed_[t]) return std::nullopt;
  Route route;
  for (std::size_t c = t;; c = parent_[c]) {
    route.cells.push_back(c);
    if (c == s) break;
  }
  std::reverse(route.cells.begin(), route.cells.end());
  route.length = g_[t];
  return route;
}

Route grid_astar(const OccupancyGrid& grid, Cell start, Cell goal) {
  if (!grid.is_free(start.col, start.row) || !grid.is_free(goal.col, goal.row))
    throw Error("A* endpoints must be free cells");
  AStarWorkspace ws;
  auto route = ws.search(grid, start, goal);
  if (!route) throw NoRouteError();
  return *route;
}

Route grid_astar(const OccupancyGrid& grid, const Pose& start, const Pose& goal) {
  return grid_astar(grid, grid.cell_at({start.x, start.y}), grid.cell_at({goal.x, goal.y}));
}

const char* to_string(RouteBackend backend) {
  return backend == RouteBackend::Graph ? "graph" : "grid";
}

RouteBackend parse_backend(std::string_view text) {
  if (text == "graph") return RouteBackend::Graph;
  if (text == "grid" || text == "astar" || text == "grid-astar") return RouteBackend::GridAstar;
  throw Error("unknown route backend '" + std::string(text) + "'");
}

TravelTimeMatrix build_travel_matrix(const SkeletonGraph& graph, const OccupancyGrid& grid,
                                     const std::vector<Aoi>& aois, const Pose& depot,
                                     double speed, RouteBackend backend, Execution exec) {
  const GraphRouter router(graph, grid);
  return build_travel_matrix(router, aois, depot, speed, backend, exec);
}

TravelTimeMatrix build_travel_matrix(const GraphRouter& router, const std::vector<Aoi>& aois,
                                     const Pose& depot, double speed, RouteBackend backend,
                                     Execution exec) {
  if (!(speed > 0.0)) throw Error("speed must be positive");
  const OccupancyGrid& grid = router.grid();
  std::vector<Pose> poses{depot};
  for (const auto& a : aois) poses.push_back(a.pose);
  const int n = static_cast<int>(poses.size());

  TravelTimeMatrix m;
  m.n = n;
  m.speed = speed;
  m.backend = backend;
  m.seconds.assign(static_cast<std::size_t>(n) * n, 0.0);
  const bool parallel = exec == Execution::Parallel;

  if (backend == RouteBackend::Graph) {
    std::vector<AnchoredSite> sites(n);
    sites[0] = router.anchor(depot, 0);
    for (int i = 1; i < n; ++i) sites[i] = router.anchor(aois[i - 1]);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i < n; ++i) {
      std::vector<AnchoredSite> rest(sites.begin() + i + 1, sites.end());
      const std::vector<double> d = router.distances_from(sites[i], rest);
      for (int j = i + 1; j < n; ++j) {
        const double t = d[j - i - 1] / speed;
        m.at(i, j) = t;
        m.at(j, i) = t;
      }
    }
  } else {
    std::vector<Cell> cells(n);
    for (int i = 0; i < n; ++i) {
      cells[i] = grid.cell_at({poses[i].x, poses[i].y});
      if (!grid.is_free(cells[i].col, cells[i].row))
        throw Error("site " + std::to_string(i) + " is not on a free cell");
    }
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    const int np = static_cast<int>(pairs.size());
#pragma omp parallel if (parallel)
    {
      AStarWorkspace ws;
#pragma omp for schedule(dynamic)
      for (int k = 0; k < np; ++k) {
        const auto [i, j] = pairs[k];
        const auto route = ws.search(grid, cells[i], cells[j]);
        const double t = route ? route->length / speed : kUnreachable;
        m.at(i, j) = t;
        m.at(j, i) = t;
      }
    }
  }
  return m;
}

namespace {

std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t\r");
    const auto e = f.find_last_not_of(" \t\r");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

double to_double(const std::string& s, const char* what) {
  if (s == "inf") return kUnreachable;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw Error(std::string("bad number for ") + what + ": '" + s + "'");
  return v;
}

int to_int(const std::string& s, const char* what) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw Error(std::string("bad integer for ") + what + ": '" + s + "'");
  return static_cast<int>(v);
}

}  // namespace

std::vector<Aoi> parse_aois(std::string_view content, double default_dwell) {
  std::vector<Aoi> out;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto f = split_fields(line, ',');
    if (f[0] == "id") continue;  // header
    if (f.size() < 6) throw Error("AOI record needs at least 6 fields: '" + line + "'");
    Aoi a;
    a.id = to_int(f[0], "id");
    a.pose.x = to_double(f[1], "x_m");
    a.pose.y = to_double(f[2], "y_m");
    a.pose.heading = to_double(f[3], "heading_rad");
    a.dwell = (f[4].empty() || f[4] == "-") ? default_dwell : to_double(f[4], "dwell_s");
    a.popularity_rank = to_int(f[5], "popularity_rank");
    if (f.size() > 6) {
      std::string label = f[6];
      for (std::size_t k = 7; k < f.size(); ++k) label += "," + f[k];
      a.label = label;
    }
    if (!(a.dwell > 0.0) && a.id != 0) throw Error("AOI " + std::to_string(a.id) + ": dwell must be positive");
    out.push_back(std::move(a));
  }
  return out;
}

SiteSet parse_sites(std::string_view content, double default_dwell) {
  std::vector<Aoi> records = parse_aois(content, default_dwell);
  if (records.empty() || records.front().id != 0) throw Error("site file must start with the depot record (id 0)");
  SiteSet out;
  out.depot = records.front().pose;
  out.aois.assign(records.begin() + 1, records.end());
  std::vector<int> ranks;
  for (std::size_t k = 0; k < out.aois.size(); ++k) {
    if (out.aois[k].id != static_cast<int>(k) + 1) throw Error("AOI ids must run 1..N in order");
    ranks.push_back(out.aois[k].popularity_rank);
  }
  std::sort(ranks.begin(), ranks.end());
  for (std::size_t k = 0; k < ranks.size(); ++k)
    if (ranks[k] != static_cast<int>(k)) throw Error("AOI popularity ranks must be a permutation of 0..N-1");
  return out;
}

std::string format_sites(const SiteSet& sites) {
  Aoi depot;
  depot.id = 0;
  depot.pose = sites.depot;
  depot.label = "depot";
  std::vector<Aoi> all{depot};
  all.insert(all.end(), sites.aois.begin(), sites.aois.end());
  return format_aois(all);
}

std::string format_aois(const std::vector<Aoi>& aois) {
  std::string out = "id,x_m,y_m,heading_rad,dwell_s,popularity_rank,label\n";
  char buf[256];
  for (const auto& a : aois) {
    std::snprintf(buf, sizeof buf, "%d,%.3f,%.3f,%.4f,%g,%d,%s\n", a.id, a.pose.x, a.pose.y,
                  a.pose.heading, a.dwell, a.popularity_rank, a.label.c_str());
    out += buf;
  }
  return out;
}

std::string format_matrix(const TravelTimeMatrix& m) {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "# backend=%s speed=%.17g n=%d\n", to_string(m.backend), m.speed, m.n);
  out += buf;
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) {
      if (j) out += ',';
      const double v = m.at(i, j);
      if (std::isinf(v)) {
        out += "inf";
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
      }
    }
    out += '\n';
  }
  return out;
}

TravelTimeMatrix parse_matrix(std::string_view content) {
  TravelTimeMatrix m;
  std::istringstream in{std::string(content)};
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream hs(line.substr(first + 1));
      std::string tok;
      while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "backend") m.backend = parse_backend(val);
        if (key == "speed") m.speed = to_double(val, "speed");
      }
      continue;
    }
    std::vector<double> row;
    for (const auto& f : split_fields(line, ',')) row.push_back(to_double(f, "matrix entry"));
    rows.push_back(std::move(row));
  }
  m.n = static_cast<int>(rows.size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != m.n) throw Error("matrix is not square");
    m.seconds.insert(m.seconds.end(), r.begin(), r.end());
  }
  return m;
}

}  // namespace tourguide
