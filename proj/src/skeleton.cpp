#include "tourguide/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <tuple>

namespace tourguide {

namespace {

// Counter-clockwise ring starting east; row grows downward.
constexpr int kRingDc[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kRingDr[8] = {0, -1, -1, -1, 0, 1, 1, 1};

inline bool fg_at(const std::vector<std::uint8_t>& fg, int w, int h, int c, int r) {
  return c >= 0 && r >= 0 && c < w && r < h && fg[static_cast<std::size_t>(r) * w + c] != 0;
}

int count_8_neighbors(const std::vector<std::uint8_t>& fg, int w, int h, std::size_t idx) {
  const int c = static_cast<int>(idx % w);
  const int r = static_cast<int>(idx / w);
  int n = 0;
  for (int k = 0; k < 8; ++k) n += fg_at(fg, w, h, c + kRingDc[k], r + kRingDr[k]) ? 1 : 0;
  return n;
}

// Sequentially deletes simple cells with at least two neighbours, in order of
// increasing clearance, until none is left.
void thin_sweep(std::vector<std::uint8_t>& fg, int w, int h, const ClearanceField& clearance) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < fg.size(); ++i)
    if (fg[i]) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const std::int64_t da = clearance.squared_cells(a);
    const std::int64_t db = clearance.squared_cells(b);
    return da != db ? da < db : a < b;
  });
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i : order) {
      if (!fg[i]) continue;
      if (count_8_neighbors(fg, w, h, i) < 2) continue;
      if (!is_simple_point(fg, w, h, i)) continue;
      fg[i] = 0;
      changed = true;
    }
  }
}

}  // namespace

std::size_t Skeleton::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> Skeleton::cells() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i]) out.push_back(i);
  return out;
}

double step_cost(std::size_t a, std::size_t b, int width, double resolution) {
  const long da = static_cast<long>(a % width) - static_cast<long>(b % width);
  const long dr = static_cast<long>(a / width) - static_cast<long>(b / width);
  return (da != 0 && dr != 0) ? resolution * std::numbers::sqrt2 : resolution;
}

bool is_simple_point(const std::vector<std::uint8_t>& fg, int width, int height,
                     std::size_t idx) {
  const int c = static_cast<int>(idx % width);
  const int r = static_cast<int>(idx / width);
  int xb[9];
  for (int k = 0; k < 8; ++k) xb[k] = fg_at(fg, width, height, c + kRingDc[k], r + kRingDr[k]) ? 0 : 1;
  xb[8] = xb[0];
  // Yokoi 8-connectivity number over the complemented ring.
  int nc = 0;
  for (int k = 0; k < 8; k += 2) {
    const int k1 = k + 1;
    const int k2 = (k + 2) % 8;
    nc += xb[k] - xb[k] * xb[k1] * xb[k2];
  }
  return nc == 1;
}

std::vector<std::size_t> skeleton_neighbors(const Skeleton& sk, std::size_t idx) {
  const int w = sk.width();
  const int c = static_cast<int>(idx % w);
  const int r = static_cast<int>(idx / w);
  std::vector<std::size_t> out;
  out.reserve(8);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (!sk.contains(c + dc, r + dr)) continue;
      if (dr != 0 && dc != 0 && (sk.contains(c + dc, r) || sk.contains(c, r + dr))) continue;
      out.push_back(static_cast<std::size_t>(r + dr) * w + (c + dc));
    }
  }
  return out;
}

int skeleton_degree(const Skeleton& sk, std::size_t idx) {
  return static_cast<int>(skeleton_neighbors(sk, idx).size());
}

std::vector<int> skeleton_components(const Skeleton& sk) {
  const int w = sk.width();
  std::vector<int> label(sk.mask().size(), -1);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (!sk.contains(i) || label[i] >= 0) continue;
    label[i] = next;
    stack.push_back(i);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const int c = static_cast<int>(cur % w);
      const int r = static_cast<int>(cur / w);
      for (int k = 0; k < 8; ++k) {
        const int nc = c + kRingDc[k];
        const int nr = r + kRingDr[k];
        if (!sk.contains(nc, nr)) continue;
        const std::size_t n = static_cast<std::size_t>(nr) * w + nc;
        if (label[n] < 0) {
          label[n] = next;
          stack.push_back(n);
        }
      }
    }
    ++next;
  }
  return label;
}

Skeleton extract_skeleton(const OccupancyGrid& grid, const ClearanceField& clearance) {
  const int w = grid.width();
  const int h = grid.height();
  const std::size_t n = grid.size();
  if (clearance.width() != w || clearance.height() != h)
    throw Error("clearance field does not match grid dimensions");

  std::vector<std::uint8_t> fg(n, 0);
  for (std::size_t i = 0; i < n; ++i) fg[i] = grid.at(i) == CellState::Free ? 1 : 0;

  // Clearance in cell units; unbounded fields compare equal everywhere.
  auto dist = [&](std::size_t i) {
    const std::int64_t s = clearance.squared_cells(i);
    return s == ClearanceField::kNoObstacle ? std::numeric_limits<double>::infinity()
                                            : std::sqrt(static_cast<double>(s));
  };

  // Medial-axis anchors: no neighbour's disc contains this cell's disc.
  std::vector<std::uint8_t> anchor(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!fg[i]) continue;
    const double di = dist(i);
    if (std::isinf(di)) continue;
    const int c = static_cast<int>(i % w);
    const int r = static_cast<int>(i / w);
    bool maximal = true;
    for (int k = 0; k < 8 && maximal; ++k) {
      const int nc = c + kRingDc[k];
      const int nr = r + kRingDr[k];
      if (!fg_at(fg, w, h, nc, nr)) continue;
      const double step = (kRingDc[k] != 0 && kRingDr[k] != 0) ? std::numbers::sqrt2 : 1.0;
      if (dist(static_cast<std::size_t>(nr) * w + nc) >= di + step - 1e-9) maximal = false;
    }
    anchor[i] = maximal ? 1 : 0;
  }

  // Phase 1: peel simple, non-anchor cells in order of increasing clearance.
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<std::uint8_t> queued(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!fg[i]) continue;
    const int c = static_cast<int>(i % w);
    const int r = static_cast<int>(i / w);
    bool boundary = false;
    for (int k = 0; k < 8 && !boundary; ++k)
      boundary = !fg_at(fg, w, h, c + kRingDc[k], r + kRingDr[k]);
    if (boundary) {
      heap.emplace(dist(i), i);
      queued[i] = 1;
    }
  }
  while (!heap.empty()) {
    const std::size_t i = heap.top().second;
    heap.pop();
    queued[i] = 0;
    if (!fg[i] || anchor[i] || !is_simple_point(fg, w, h, i)) continue;
    fg[i] = 0;
    const int c = static_cast<int>(i % w);
    const int r = static_cast<int>(i / w);
    for (int k = 0; k < 8; ++k) {
      const int nc = c + kRingDc[k];
      const int nr = r + kRingDr[k];
      if (!fg_at(fg, w, h, nc, nr)) continue;
      const std::size_t j = static_cast<std::size_t>(nr) * w + nc;
      if (!queued[j]) {
        heap.emplace(dist(j), j);
        queued[j] = 1;
      }
    }
  }

  // Phase 2: thin anchor plateaus to one-cell width, keeping endpoints.
  thin_sweep(fg, w, h, clearance);

  Skeleton sk(w, h);
  for (std::size_t i = 0; i < n; ++i)
    if (fg[i]) sk.insert(i);
  return sk;
}

Skeleton prune_skeleton(const Skeleton& skeleton, const ClearanceField& clearance,
                        const PruneOptions& options) {
  Skeleton sk = skeleton;
  const int w = sk.width();
  const double res = clearance.resolution();

  struct Spur {
    std::size_t tip;
    std::size_t junction;
    double length;
    std::vector<std::size_t> cells;
  };

  bool pruned_any = false;
  for (;;) {
    std::vector<Spur> spurs;
    for (std::size_t tip : sk.cells()) {
      if (skeleton_degree(sk, tip) != 1) continue;
      Spur spur{tip, 0, 0.0, {tip}};
      std::size_t prev = tip;
      std::size_t cur = skeleton_neighbors(sk, tip).front();
      bool reached_junction = false;
      for (;;) {
        spur.length += step_cost(prev, cur, w, res);
        const auto nb = skeleton_neighbors(sk, cur);
        if (nb.size() >= 3) {
          spur.junction = cur;
          reached_junction = true;
          break;
        }
        if (nb.size() != 2) break;  // reached another tip: isolated path
        const std::size_t next = nb[0] == prev ? nb[1] : nb[0];
        spur.cells.push_back(cur);
        prev = cur;
        cur = next;
      }
      if (!reached_junction) continue;
      const bool too_short = spur.length < options.min_branch_length;
      const bool too_tight = clearance.at(tip) < options.min_clearance;
      if (too_short || too_tight) spurs.push_back(std::move(spur));
    }
    if (spurs.empty()) break;

    // Never strip every branch off a junction: keep the longest one there.
    std::sort(spurs.begin(), spurs.end(), [](const Spur& a, const Spur& b) {
      return std::tie(a.junction, a.tip) < std::tie(b.junction, b.tip);
    });
    std::vector<std::uint8_t> keep(spurs.size(), 0);
    for (std::size_t lo = 0; lo < spurs.size();) {
      std::size_t hi = lo;
      while (hi < spurs.size() && spurs[hi].junction == spurs[lo].junction) ++hi;
      const int degree = skeleton_degree(sk, spurs[lo].junction);
      if (static_cast<int>(hi - lo) >= degree) {
        std::size_t best = lo;
        for (std::size_t k = lo + 1; k < hi; ++k)
          if (spurs[k].length > spurs[best].length) best = k;
        keep[best] = 1;
      }
      lo = hi;
    }
    bool removed = false;
    for (std::size_t k = 0; k < spurs.size(); ++k) {
      if (keep[k]) continue;
      for (std::size_t c : spurs[k].cells) sk.erase(c);
      removed = true;
    }
    if (!removed) break;
    pruned_any = true;
  }
  if (pruned_any) {
    // Spur removal can leave 2x2 blocks where junctions used to be.
    std::vector<std::uint8_t> fg = sk.mask();
    thin_sweep(fg, w, sk.height(), clearance);
    Skeleton thinned(w, sk.height());
    for (std::size_t i = 0; i < fg.size(); ++i)
      if (fg[i]) thinned.insert(i);
    return thinned;
  }
  return sk;
}

}  // namespace tourguide
