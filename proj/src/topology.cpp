#include "tourguide/topology.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>
#include <utility>

namespace tourguide {

const char* to_string(NodeKind kind) {
  return kind == NodeKind::Place ? "place" : "decision";
}

int SkeletonGraph::degree(int node) const {
  int d = 0;
  for (const auto& e : edges) {
    if (e.a == node) ++d;
    if (e.b == node) ++d;
  }
  return d;
}

std::vector<std::vector<int>> SkeletonGraph::incidence() const {
  std::vector<std::vector<int>> inc(nodes.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    inc[edges[i].a].push_back(static_cast<int>(i));
    if (edges[i].b != edges[i].a) inc[edges[i].b].push_back(static_cast<int>(i));
  }
  return inc;
}

Point2 SkeletonGraph::cell_center(std::size_t cell) const {
  const int c = static_cast<int>(cell % width);
  const int r = static_cast<int>(cell / width);
  return {origin.x + (c + 0.5) * resolution, origin.y + (r + 0.5) * resolution};
}

int SkeletonGraph::component_count() const {
  int m = 0;
  for (const auto& n : nodes) m = std::max(m, n.component + 1);
  return m;
}

namespace {

struct RawNode {
  std::size_t rep = 0;
  bool artificial = false;
  bool alive = true;
};

struct RawEdge {
  int a = 0;
  int b = 0;
  std::vector<std::size_t> poly;
  bool alive = true;
};

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

SkeletonGraph build_topology(const Skeleton& skeleton, const ClearanceField& clearance,
                             Point2 origin) {
  const int w = skeleton.width();
  const std::size_t n = skeleton.mask().size();
  SkeletonGraph graph;
  graph.width = w;
  graph.height = skeleton.height();
  graph.resolution = clearance.resolution();
  graph.origin = origin;
  if (clearance.width() != w || clearance.height() != skeleton.height())
    throw Error("clearance field does not match skeleton dimensions");

  const std::vector<std::size_t> cells = skeleton.cells();
  if (cells.empty()) return graph;

  std::vector<int> deg(n, -1);
  for (std::size_t c : cells) deg[c] = skeleton_degree(skeleton, c);

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<int> node_of(n, -1);
  std::vector<std::size_t> cluster_parent(n, kNone);
  std::vector<RawNode> raw_nodes;

  // Junction clusters and tips.
  for (std::size_t c : cells) {
    if (node_of[c] >= 0) continue;
    if (deg[c] <= 1) {
      node_of[c] = static_cast<int>(raw_nodes.size());
      raw_nodes.push_back({c, false, true});
      cluster_parent[c] = c;
      continue;
    }
    if (deg[c] < 3) continue;
    const int id = static_cast<int>(raw_nodes.size());
    std::vector<std::size_t> members{c};
    node_of[c] = id;
    for (std::size_t k = 0; k < members.size(); ++k) {
      for (std::size_t nb : skeleton_neighbors(skeleton, members[k])) {
        if (deg[nb] >= 3 && node_of[nb] < 0) {
          node_of[nb] = id;
          members.push_back(nb);
        }
      }
    }
    std::size_t rep = members.front();
    for (std::size_t m : members) {
      const double cm = clearance.at(m);
      const double cr = clearance.at(rep);
      if (cm > cr || (cm == cr && m < rep)) rep = m;
    }
    // BFS tree inside the cluster rooted at the representative cell.
    std::queue<std::size_t> bfs;
    bfs.push(rep);
    cluster_parent[rep] = rep;
    while (!bfs.empty()) {
      const std::size_t cur = bfs.front();
      bfs.pop();
      for (std::size_t nb : skeleton_neighbors(skeleton, cur)) {
        if (node_of[nb] == id && cluster_parent[nb] == kNone) {
          cluster_parent[nb] = cur;
          bfs.push(nb);
        }
      }
    }
    raw_nodes.push_back({rep, false, true});
  }

  auto path_from_rep = [&](std::size_t cell) {
    std::vector<std::size_t> path{cell};
    while (cluster_parent[path.back()] != path.back()) path.push_back(cluster_parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
  };

  std::vector<RawEdge> raw_edges;
  auto add_edge = [&](const std::vector<std::size_t>& chain) {
    const std::size_t u = chain.front();
    const std::size_t v = chain.back();
    std::vector<std::size_t> poly = path_from_rep(u);
    poly.insert(poly.end(), chain.begin() + 1, chain.end());
    std::vector<std::size_t> tail = path_from_rep(v);
    std::reverse(tail.begin(), tail.end());
    poly.insert(poly.end(), tail.begin() + 1, tail.end());
    raw_edges.push_back({node_of[u], node_of[v], std::move(poly), true});
  };

  std::vector<std::uint8_t> visited(n, 0);
  std::set<std::pair<std::size_t, std::size_t>> direct_links;
  for (std::size_t u : cells) {
    if (node_of[u] < 0) continue;
    for (std::size_t v : skeleton_neighbors(skeleton, u)) {
      if (node_of[v] >= 0) {
        if (node_of[v] == node_of[u]) continue;
        if (direct_links.emplace(std::min(u, v), std::max(u, v)).second) add_edge({u, v});
        continue;
      }
      if (visited[v]) continue;
      std::vector<std::size_t> chain{u, v};
      visited[v] = 1;
      std::size_t prev = u;
      std::size_t cur = v;
      for (;;) {
        const auto nb = skeleton_neighbors(skeleton, cur);
        const std::size_t next = nb[0] == prev ? nb[1] : nb[0];
        chain.push_back(next);
        if (node_of[next] >= 0) break;
        visited[next] = 1;
        prev = cur;
        cur = next;
      }
      add_edge(chain);
    }
  }

  // Remaining degree-2 cells form loops with no node on them.
  for (std::size_t s : cells) {
    if (node_of[s] >= 0 || visited[s]) continue;
    const int id = static_cast<int>(raw_nodes.size());
    raw_nodes.push_back({s, true, true});
    node_of[s] = id;
    cluster_parent[s] = s;
    visited[s] = 1;
    auto nb = skeleton_neighbors(skeleton, s);
    std::vector<std::size_t> chain{s};
    std::size_t prev = s;
    std::size_t cur = std::min(nb[0], nb[1]);
    while (cur != s) {
      chain.push_back(cur);
      visited[cur] = 1;
      const auto nbc = skeleton_neighbors(skeleton, cur);
      const std::size_t next = nbc[0] == prev ? nbc[1] : nbc[0];
      prev = cur;
      cur = next;
    }
    chain.push_back(s);
    raw_edges.push_back({id, id, std::move(chain), true});
  }

  // Absorb non-artificial nodes that ended up with exactly two edge ends.
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<int> ends(raw_nodes.size(), 0);
    for (const auto& e : raw_edges) {
      if (!e.alive) continue;
      ++ends[e.a];
      ++ends[e.b];
    }
    for (int id = 0; id < static_cast<int>(raw_nodes.size()); ++id) {
      RawNode& node = raw_nodes[id];
      if (!node.alive || node.artificial || ends[id] != 2) continue;
      std::vector<int> inc;
      for (int e = 0; e < static_cast<int>(raw_edges.size()); ++e)
        if (raw_edges[e].alive && (raw_edges[e].a == id || raw_edges[e].b == id)) inc.push_back(e);
      if (inc.size() == 1) {
        node.artificial = true;  // lone self-loop: the node is the loop split
        changed = true;
        continue;
      }
      RawEdge first = raw_edges[inc[0]];
      RawEdge second = raw_edges[inc[1]];
      if (first.b != id) {
        std::swap(first.a, first.b);
        std::reverse(first.poly.begin(), first.poly.end());
      }
      if (second.a != id) {
        std::swap(second.a, second.b);
        std::reverse(second.poly.begin(), second.poly.end());
      }
      RawEdge merged{first.a, second.b, first.poly, true};
      merged.poly.insert(merged.poly.end(), second.poly.begin() + 1, second.poly.end());
      raw_edges[inc[0]].alive = false;
      raw_edges[inc[1]].alive = false;
      node.alive = false;
      raw_edges.push_back(std::move(merged));
      changed = true;
      break;
    }
  }

  // Final numbering by representative cell.
  std::vector<int> alive_ids;
  for (int id = 0; id < static_cast<int>(raw_nodes.size()); ++id)
    if (raw_nodes[id].alive) alive_ids.push_back(id);
  std::sort(alive_ids.begin(), alive_ids.end(),
            [&](int a, int b) { return raw_nodes[a].rep < raw_nodes[b].rep; });
  std::vector<int> remap(raw_nodes.size(), -1);
  for (std::size_t k = 0; k < alive_ids.size(); ++k) remap[alive_ids[k]] = static_cast<int>(k);

  for (std::size_t k = 0; k < alive_ids.size(); ++k) {
    const RawNode& rn = raw_nodes[alive_ids[k]];
    SkeletonNode node;
    node.id = static_cast<int>(k);
    node.cell = rn.rep;
    node.clearance = clearance.at(rn.rep);
    node.artificial = rn.artificial;
    graph.nodes.push_back(node);
  }
  for (auto& e : raw_edges) {
    if (!e.alive) continue;
    SkeletonEdge edge;
    edge.a = remap[e.a];
    edge.b = remap[e.b];
    edge.polyline = std::move(e.poly);
    if (edge.a > edge.b) {
      std::swap(edge.a, edge.b);
      std::reverse(edge.polyline.begin(), edge.polyline.end());
    } else if (edge.a == edge.b) {
      std::vector<std::size_t> rev(edge.polyline.rbegin(), edge.polyline.rend());
      if (rev < edge.polyline) edge.polyline = std::move(rev);
    }
    for (std::size_t k = 1; k < edge.polyline.size(); ++k)
      edge.length += step_cost(edge.polyline[k - 1], edge.polyline[k], w, graph.resolution);
    graph.edges.push_back(std::move(edge));
  }
  std::sort(graph.edges.begin(), graph.edges.end(), [](const SkeletonEdge& x, const SkeletonEdge& y) {
    return std::tie(x.a, x.b, x.polyline) < std::tie(y.a, y.b, y.polyline);
  });

  std::vector<int> parent(graph.nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& e : graph.edges) {
    const int ra = find_root(parent, e.a);
    const int rb = find_root(parent, e.b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<int> label(graph.nodes.size(), -1);
  int next_label = 0;
  for (auto& node : graph.nodes) {
    const int root = find_root(parent, node.id);
    if (label[root] < 0) label[root] = next_label++;
    node.component = label[root];
    const int d = graph.degree(node.id);
    node.kind = (d >= 3 || node.artificial) ? NodeKind::DecisionPoint : NodeKind::Place;
  }
  return graph;
}

std::string format_graph(const SkeletonGraph& graph) {
  std::string out;
  char buf[160];
  for (const auto& node : graph.nodes) {
    const Point2 p = graph.cell_center(node.cell);
    std::snprintf(buf, sizeof buf, "node %d %.6f %.6f %s %.6f\n", node.id, p.x, p.y,
                  to_string(node.kind), node.clearance);
    out += buf;
  }
  for (const auto& e : graph.edges) {
    std::snprintf(buf, sizeof buf, "edge %d %d %.6f %zu\n", e.a, e.b, e.length, e.polyline.size());
    out += buf;
  }
  return out;
}

MapBuildResult build_map(const OccupancyGrid& grid, const MapBuildOptions& options,
                         Execution exec) {
  MapBuildResult r;
  r.inflated = inflate_grid(grid, options.robot_radius);
  r.clearance = compute_clearance(r.inflated, exec);
  r.raw_skeleton = extract_skeleton(r.inflated, r.clearance);
  r.skeleton = prune_skeleton(r.raw_skeleton, r.clearance, options.prune);
  r.graph = build_topology(r.skeleton, r.clearance, r.inflated.origin());
  return r;
}

}  // namespace tourguide
