#include <doctest.h>

#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "oracles.hpp"
#include "tourguide/experiment.hpp"
#include "tourguide/skeleton.hpp"
#include "tourguide/synthetic_maps.hpp"
#include "tourguide/topology.hpp"

using namespace tourguide;

namespace {

std::string p5(int w, int h, const std::vector<unsigned char>& px) {
  std::string s = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  s.append(px.begin(), px.end());
  return s;
}

const char* kMeta = "resolution: 0.05\norigin_x: 0\norigin_y: 0\nfree_thresh: 0.196\noccupied_thresh: 0.65\nnegate: 0\n";

std::size_t count_kind(const SkeletonGraph& g, NodeKind k) {
  std::size_t n = 0;
  for (const auto& node : g.nodes) n += node.kind == k;
  return n;
}

// Connected components of a skeleton under 8-connectivity via BFS.
std::vector<int> bfs_components(const Skeleton& sk) {
  std::vector<int> label(static_cast<std::size_t>(sk.width()) * sk.height(), -1);
  int next = 0;
  for (std::size_t s : sk.cells()) {
    if (label[s] >= 0) continue;
    std::queue<std::size_t> q;
    q.push(s);
    label[s] = next;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      const int c = static_cast<int>(u % sk.width()), r = static_cast<int>(u / sk.width());
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          if (!sk.contains(c + dc, r + dr)) continue;
          const std::size_t v = static_cast<std::size_t>(r + dr) * sk.width() + c + dc;
          if (label[v] < 0) {
            label[v] = next;
            q.push(v);
          }
        }
    }
    ++next;
  }
  return label;
}

void check_graph_invariants(const SkeletonGraph& g, const OccupancyGrid& inflated) {
  for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i) {
    const int d = g.degree(i);
    // A pure loop's split node carries its self-loop, degree 2.
    if (!g.nodes[i].artificial) CHECK(d != 2);
    if (d == 1) CHECK(g.nodes[i].kind == NodeKind::Place);
    if (d >= 3) CHECK(g.nodes[i].kind == NodeKind::DecisionPoint);
  }
  for (const auto& e : g.edges) {
    double sum = 0.0;
    for (std::size_t k = 0; k < e.polyline.size(); ++k) {
      CHECK(inflated.at(e.polyline[k]) == CellState::Free);
      if (k) sum += step_cost(e.polyline[k - 1], e.polyline[k], g.width, g.resolution);
    }
    const Point2 a = g.cell_center(g.nodes[e.a].cell), b = g.cell_center(g.nodes[e.b].cell);
    CHECK(e.length >= std::hypot(a.x - b.x, a.y - b.y) - 1e-9);
    CHECK(e.length == doctest::Approx(sum).epsilon(1e-12));
    CHECK(e.length <= (e.polyline.size() - 1) * g.resolution * std::sqrt(2.0) + 1e-9);
  }
}

}  // namespace

TEST_CASE("pgm thresholds map pixels to states") {
  const OccupancyGrid white = load_grid(p5(3, 3, std::vector<unsigned char>(9, 255)), kMeta);
  CHECK(white.count(CellState::Free) == 9);
  const OccupancyGrid black = load_grid(p5(3, 3, std::vector<unsigned char>(9, 0)), kMeta);
  CHECK(black.count(CellState::Occupied) == 9);

  std::vector<unsigned char> px(16);
  for (int i = 0; i < 16; ++i) px[i] = ((i % 4 + i / 4) % 2) ? 0 : 255;
  const OccupancyGrid checker = load_grid(p5(4, 4, px), kMeta);
  for (int i = 0; i < 16; ++i)
    CHECK(checker.at(static_cast<std::size_t>(i)) == (px[i] ? CellState::Free : CellState::Occupied));

  // p = (255 - v) / 255 strictly between the thresholds is Unknown.
  const OccupancyGrid gray = load_grid(p5(1, 1, {128}), kMeta);
  CHECK(gray.at(std::size_t{0}) == CellState::Unknown);
}

TEST_CASE("ascii pgm and negate") {
  const std::string meta = std::string(kMeta).replace(std::string(kMeta).find("negate: 0"), 9, "negate: 1");
  const OccupancyGrid g = load_grid("P2\n# comment\n2 1\n255\n0 255\n", meta);
  CHECK(g.at(0, 0) == CellState::Free);
  CHECK(g.at(1, 0) == CellState::Occupied);
}

TEST_CASE("malformed map inputs are rejected") {
  CHECK_THROWS_AS(load_grid("P7\n1 1\n255\nx", kMeta), Error);
  CHECK_THROWS_AS(load_grid(p5(3, 3, std::vector<unsigned char>(4, 0)), kMeta), Error);
  CHECK_THROWS_AS(load_grid(p5(1, 1, {0}), "resolution: 0.05\nfree_thresh: 0.7\noccupied_thresh: 0.65\n"), Error);
  CHECK_THROWS_AS(load_grid(p5(1, 1, {0}), "resolution: -1\n"), Error);
  CHECK_THROWS_AS(load_grid(p5(1, 1, {0}), "origin_x: 0\n"), Error);
}

TEST_CASE("pgm and metadata round trip") {
  const OccupancyGrid g = synthetic::facility_map();
  MapMetadata meta;
  meta.resolution = g.resolution();
  const OccupancyGrid back = load_grid(encode_pgm(g), encode_map_metadata(meta));
  CHECK(back.cells() == g.cells());
  CHECK(back.resolution() == g.resolution());
}

TEST_CASE("inflation") {
  oracle::Rng rng(7);
  OccupancyGrid g = oracle::random_grid(12, 9, 0.2, rng);
  g.set(3, 3, CellState::Unknown);
  const OccupancyGrid zero = inflate_grid(g, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK((zero.at(i) == CellState::Free) == (g.at(i) == CellState::Free));

  OccupancyGrid dot(11, 11, 0.05);
  dot.set(5, 5, CellState::Occupied);
  CHECK(inflate_grid(dot, 0.1).count(CellState::Occupied) == 13);
  CHECK(inflate_grid(dot, 10.0).count(CellState::Occupied) == dot.size());
  CHECK_THROWS_AS(inflate_grid(dot, -0.1), Error);
}

TEST_CASE("clearance matches brute-force nearest obstacle scan") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = static_cast<int>(uniform_int(rng, 1, 24)), h = static_cast<int>(uniform_int(rng, 1, 24));
    const OccupancyGrid g = oracle::random_grid(w, h, uniform01(rng) * 0.3, rng);
    const auto expect = oracle::clearance(g);
    const ClearanceField serial = compute_clearance_serial(g);
    const ClearanceField par = compute_clearance(g, Execution::Parallel);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (std::isinf(expect[i])) {
        CHECK(std::isinf(serial.at(i)));
      } else {
        CHECK(serial.at(i) == doctest::Approx(expect[i]).epsilon(1e-12));
      }
      CHECK(serial.squared_cells(i) == par.squared_cells(i));
    }
  }
}

TEST_CASE("clearance special cases") {
  const OccupancyGrid full(6, 4, 0.05, {}, CellState::Occupied);
  const ClearanceField zero = compute_clearance(full);
  for (double v : zero.values()) CHECK(v == 0.0);

  OccupancyGrid one(5, 5, 0.05, {}, CellState::Occupied);
  one.set(2, 2, CellState::Free);
  CHECK(compute_clearance(one).at(2, 2) == doctest::Approx(0.05));

  // Wall cell centers sit one cell beyond the free band, so the center line of
  // a 21-cell band is 11 cells from either wall.
  const OccupancyGrid corridor = synthetic::corridor_map(60, 21);
  const ClearanceField c = compute_clearance(corridor);
  double best = 0.0;
  for (double v : c.values()) best = std::max(best, v);
  const auto brute = oracle::clearance(corridor);
  CHECK(best == doctest::Approx(*std::max_element(brute.begin(), brute.end())));
  CHECK(std::abs(best - 10 * 0.05) <= 0.05 + 1e-12);
}

TEST_CASE("skeleton of thin and empty maps") {
  const OccupancyGrid thin = synthetic::corridor_map(30, 1);
  const Skeleton sk = extract_skeleton(thin, compute_clearance(thin));
  for (std::size_t i = 0; i < thin.size(); ++i) CHECK(sk.contains(i) == (thin.at(i) == CellState::Free));

  const OccupancyGrid full(8, 8, 0.05, {}, CellState::Occupied);
  CHECK(extract_skeleton(full, compute_clearance(full)).count() == 0);
}

TEST_CASE("plus map skeleton follows both center lines") {
  const OccupancyGrid g = synthetic::plus_map();
  const ClearanceField c = compute_clearance(g);
  const Skeleton sk = extract_skeleton(g, c);
  const int mid = g.width() / 2;
  // Away from the junction and the closed arm ends, the skeleton is exactly the center line.
  for (int k = 10; k < g.width() - 10; ++k) {
    if (std::abs(k - mid) <= 3) continue;
    CHECK(sk.contains(k, mid));
    CHECK(sk.contains(mid, k));
    for (int off = 1; off <= 2; ++off) {
      CHECK_FALSE(sk.contains(k, mid + off));
      CHECK_FALSE(sk.contains(k, mid - off));
    }
  }
  CHECK(sk.contains(mid, mid));
  for (std::size_t i : sk.cells()) CHECK(g.at(i) == CellState::Free);
}

TEST_CASE("pruning") {
  const OccupancyGrid g = synthetic::plus_map();
  const ClearanceField c = compute_clearance(g);
  const Skeleton sk = extract_skeleton(g, c);
  CHECK(prune_skeleton(sk, c, {0.0, 0.0}) == sk);

  // A hand-made trunk with a 2-cell spur.
  Skeleton t(20, 7);
  for (int col = 1; col < 19; ++col) t.insert(3 * 20 + col);
  t.insert(2 * 20 + 9);
  t.insert(1 * 20 + 9);
  const ClearanceField flat(20, 7, 0.05, std::vector<std::int64_t>(140, 100));
  const Skeleton pruned = prune_skeleton(t, flat, {5 * 0.05, 0.0});
  CHECK_FALSE(pruned.contains(9, 2));
  CHECK_FALSE(pruned.contains(9, 1));
  for (int col = 1; col < 19; ++col) CHECK(pruned.contains(col, 3));
}

TEST_CASE("noisy plus map prunes to four arms and one junction") {
  OccupancyGrid g = synthetic::plus_map(81, 9, 5);
  // Notches in the walls create short spurs in the raw skeleton.
  const int lo = (81 - 9) / 2;
  for (int col : {12, 20, 60, 70}) {
    g.set(col, lo - 1, CellState::Free);
    g.set(col, lo + 9, CellState::Free);
  }
  for (int row : {15, 64}) g.set(lo - 1, row, CellState::Free);
  const ClearanceField c = compute_clearance(g);
  const Skeleton raw = extract_skeleton(g, c);
  const Skeleton pruned = prune_skeleton(raw, c, {0.5, 0.0});
  CHECK(pruned.count() < raw.count());
  const SkeletonGraph graph = build_topology(pruned, c);
  CHECK(count_kind(graph, NodeKind::DecisionPoint) == 1);
  CHECK(count_kind(graph, NodeKind::Place) == 4);
  CHECK(graph.edges.size() == 4);
  // Exhaustive branch enumeration: every endpoint cell leads to the junction.
  int endpoints = 0, junctions = 0;
  for (std::size_t i : pruned.cells()) {
    const int d = skeleton_degree(pruned, i);
    endpoints += d == 1;
    junctions += d >= 3;
  }
  CHECK(endpoints == 4);
  CHECK(junctions >= 1);
}

TEST_CASE("topology of synthetic maps") {
  SUBCASE("plus") {
    const OccupancyGrid g = synthetic::plus_map();
    const ClearanceField c = compute_clearance(g);
    const SkeletonGraph graph = build_topology(prune_skeleton(extract_skeleton(g, c), c, {0.5, 0.0}), c);
    REQUIRE(graph.nodes.size() == 5);
    CHECK(count_kind(graph, NodeKind::DecisionPoint) == 1);
    CHECK(count_kind(graph, NodeKind::Place) == 4);
    CHECK(graph.edges.size() == 4);
    for (int i = 0; i < 5; ++i) CHECK(graph.degree(i) == (graph.nodes[i].kind == NodeKind::DecisionPoint ? 4 : 1));
    check_graph_invariants(graph, g);
  }
  SUBCASE("corridor") {
    const OccupancyGrid g = synthetic::corridor_map(200, 9);
    const ClearanceField c = compute_clearance(g);
    const SkeletonGraph graph = build_topology(prune_skeleton(extract_skeleton(g, c), c, {0.5, 0.0}), c);
    CHECK(count_kind(graph, NodeKind::Place) == 2);
    CHECK(graph.edges.size() == 1);
    check_graph_invariants(graph, g);
  }
  SUBCASE("annulus") {
    const OccupancyGrid g = synthetic::annulus_map();
    const ClearanceField c = compute_clearance(g);
    const SkeletonGraph graph = build_topology(prune_skeleton(extract_skeleton(g, c), c, {0.5, 0.0}), c);
    CHECK(count_kind(graph, NodeKind::Place) == 0);
    CHECK(graph.nodes.size() >= 1);
    CHECK(static_cast<int>(graph.nodes.size()) - static_cast<int>(graph.edges.size()) == 0);
    bool artificial = false;
    for (const auto& n : graph.nodes) artificial |= n.artificial;
    CHECK(artificial);
    check_graph_invariants(graph, g);
  }
}

TEST_CASE("bundled map invariants") {
  const std::filesystem::path dir = bundled_data_dir();
  const OccupancyGrid g = load_grid_files(dir / "facility.pgm", dir / "facility.yaml");
  CHECK(g.width() == 400);
  CHECK(g.height() == 400);
  CHECK(g.resolution() == 0.05);
  const MapBuildOptions opts;
  const MapBuildResult r = build_map(g, opts);
  for (std::size_t i : r.raw_skeleton.cells()) CHECK(r.inflated.at(i) == CellState::Free);
  for (std::size_t i : r.skeleton.cells()) CHECK(r.inflated.at(i) == CellState::Free);

  // Prune safety: surviving cells connected before stay connected after.
  const auto before = bfs_components(r.raw_skeleton);
  const auto after = bfs_components(r.skeleton);
  std::map<int, int> rep;
  for (std::size_t i : r.skeleton.cells()) {
    auto [it, fresh] = rep.emplace(before[i], after[i]);
    if (!fresh) CHECK(it->second == after[i]);
  }
  CHECK(r.graph.component_count() == 1);
  check_graph_invariants(r.graph, r.inflated);

  const MapBuildResult again = build_map(g, opts, Execution::Serial);
  CHECK(format_graph(again.graph) == format_graph(r.graph));
}
