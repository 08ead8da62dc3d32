#include "robinson/patch.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "grid_solver.hpp"
#include "robinson/errors.hpp"

namespace robinson {

using detail::Domain;
using detail::GridSolver;
using detail::SearchOutcome;

namespace {

Domain cross_mask(const TileSet& tiles) {
  Domain m = 0;
  for (int t = 0; t < tiles.size(); ++t) {
    if (tiles.is_cross(t)) m |= Domain{1} << t;
  }
  return m;
}

// Offset of the secondary mark on a side, if any (at most one per tile side
// in the shipped set; the first is reported).
std::optional<int> secondary_offset(const TileSet& tiles, int tile, Side s) {
  for (const auto& m : tiles.edge(tile, s).marks()) {
    if (m.color == LineColor::secondary) return m.offset;
  }
  return std::nullopt;
}

bool has_secondary(const TileSet& tiles, int tile, Side s, int offset) {
  for (const auto& m : tiles.edge(tile, s).marks()) {
    if (m.color == LineColor::secondary && m.offset == offset) return true;
  }
  return false;
}

std::optional<Arrow> principal_arrow(const TileSet& tiles, int tile, Side s) {
  for (const auto& m : tiles.edge(tile, s).marks()) {
    if (m.color == LineColor::principal) return m.arrow;
  }
  return std::nullopt;
}

// Quadrant (sx, sy) of a cross's secondary corner, read from the sides its
// two secondary marks sit on.
std::optional<std::pair<int, int>> corner_quadrant(const TileSet& tiles, int tile) {
  auto n = secondary_offset(tiles, tile, Side::north);
  auto s = secondary_offset(tiles, tile, Side::south);
  auto e = secondary_offset(tiles, tile, Side::east);
  auto w = secondary_offset(tiles, tile, Side::west);
  if (n.has_value() == s.has_value() || e.has_value() == w.has_value()) return std::nullopt;
  int sx = e ? 1 : -1;
  int sy = n ? 1 : -1;
  int vx = n ? *n : *s;  // x position of the vertical leg
  int hy = e ? *e : *w;  // y position of the horizontal leg
  if (vx != sx || hy != sy) return std::nullopt;
  return std::pair{sx, sy};
}

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int ceil_div(int a, int b) { return -floor_div(-a, b); }

}  // namespace

bool legal(const TileSet& tiles, const Patch& p) {
  const auto o = p.origin();
  for (int y = o.y; y < o.y + p.height(); ++y) {
    for (int x = o.x; x < o.x + p.width(); ++x) {
      int t = p.at(x, y);
      if (t < 0 || t >= tiles.size()) return false;
      if (p.on_anchor(x, y) && !tiles.is_cross(t)) return false;
      if (x + 1 < o.x + p.width()) {
        int r = p.at(x + 1, y);
        if (r < 0 || r >= tiles.size() || !tiles.matches_horizontal(t, r)) return false;
      }
      if (y + 1 < o.y + p.height()) {
        int a = p.at(x, y + 1);
        if (a < 0 || a >= tiles.size() || !tiles.matches_vertical(t, a)) return false;
      }
    }
  }
  return true;
}

Patch generate_full_patch(const TileSet& tiles, const GenerateOptions& opts) {
  if (opts.width < 1 || opts.height < 1 || opts.margin < 0) {
    throw PreconditionError("patch-engine", "generate_patch", "width, height must be positive, margin non-negative");
  }
  const int w = opts.width + 2 * opts.margin;
  const int h = opts.height + 2 * opts.margin;
  const LatticePoint origin{-opts.margin, -opts.margin};
  const Domain crosses = cross_mask(tiles);

  for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
    GridSolver solver(tiles, w, h);
    Patch out(origin, w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (out.on_anchor(origin.x + x, origin.y + y)) solver.restrict(x, y, crosses);
      }
    }
    std::uint64_t seed = opts.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt);
    std::uint64_t budget = opts.restart_nodes ? opts.restart_nodes : 3ULL * static_cast<std::uint64_t>(w) * h + 1000;
    auto outcome = solver.search(seed, budget);
    if (outcome == SearchOutcome::exhausted) {
      throw UnsatisfiableError("patch-engine", "generate_patch", "search space exhausted");
    }
    if (outcome == SearchOutcome::solved) {
      const auto& sol = solver.solution();
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) out.set(origin.x + x, origin.y + y, sol[y * w + x]);
      }
      return out;
    }
  }
  throw UnsatisfiableError("patch-engine", "generate_patch", "no patch within the restart budget");
}

Patch generate_patch(const TileSet& tiles, const GenerateOptions& opts) {
  return generate_full_patch(tiles, opts).window({0, 0}, opts.width, opts.height);
}

std::optional<Deflation> deflate(const TileSet& tiles, const Patch& p) {
  const auto o = p.origin();
  const auto a = p.parity_anchor();
  std::optional<Deflation> found;
  for (int oy : {0, 2}) {
    for (int ox : {0, 2}) {
      LatticePoint shift{(a.x + 1 + ox) % 4, (a.y + 1 + oy) % 4};
      int i0 = ceil_div(o.x - shift.x, 2), i1 = floor_div(o.x + p.width() - 1 - shift.x, 2);
      int j0 = ceil_div(o.y - shift.y, 2), j1 = floor_div(o.y + p.height() - 1 - shift.y, 2);
      if (i1 < i0 || j1 < j0) continue;
      Patch q({i0, j0}, i1 - i0 + 1, j1 - j0 + 1);
      for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) q.set(i, j, p.at(2 * i + shift.x, 2 * j + shift.y));
      }
      if (!legal(tiles, q)) continue;
      if (found) return std::nullopt;
      found = Deflation{std::move(q), shift};
    }
  }
  return found;
}

bool hierarchical(const TileSet& tiles, const Patch& p, int min_extent) {
  if (!legal(tiles, p)) return false;
  Patch cur = p;
  while (cur.width() >= min_extent && cur.height() >= min_extent) {
    auto d = deflate(tiles, cur);
    if (!d) return false;
    cur = std::move(d->patch);
  }
  return true;
}

Patch generate_hierarchical_patch(const TileSet& tiles, const GenerateOptions& opts, int attempts) {
  GenerateOptions o = opts;
  for (int k = 0; k < attempts; ++k, ++o.seed) {
    Patch p = generate_patch(tiles, o);
    if (hierarchical(tiles, p)) return p;
  }
  throw ValidationError("patch-engine", "generate_hierarchical_patch", "every attempt contained a defect line");
}

FrameReport verify_frame_hierarchy(const TileSet& tiles, const Patch& p, int n) {
  FrameReport report;
  report.frames_per_level.assign(std::max(n, 0), 0);
  if (n < 0) throw PreconditionError("patch-engine", "verify_frame_hierarchy", "n must be non-negative");
  if (!legal(tiles, p)) {
    report.ok = false;
    return report;
  }
  const auto o = p.origin();
  const int x_end = o.x + p.width(), y_end = o.y + p.height();

  // Follows the secondary line leaving a cross corner along one axis until
  // the next cross. Returns that cross's position, or nullopt if the line
  // leaves the patch; sets `broken` when the line ends anywhere else.
  auto trace = [&](int x, int y, int dx, int dy, int track, bool& broken) -> std::optional<LatticePoint> {
    Side in_side = dx > 0 ? Side::west : dx < 0 ? Side::east : dy > 0 ? Side::south : Side::north;
    while (true) {
      x += dx;
      y += dy;
      if (x < o.x || y < o.y || x >= x_end || y >= y_end) return std::nullopt;
      int t = p.at(x, y);
      if (!has_secondary(tiles, t, in_side, track)) {
        broken = true;
        return std::nullopt;
      }
      if (tiles.is_cross(t)) return LatticePoint{x, y};
      if (!has_secondary(tiles, t, opposite(in_side), track)) {
        broken = true;
        return std::nullopt;
      }
    }
  };

  std::map<int, int> frames_by_size;
  for (int y = o.y; y < y_end; ++y) {
    for (int x = o.x; x < x_end; ++x) {
      int t = p.at(x, y);
      if (!tiles.is_cross(t)) continue;
      auto q = corner_quadrant(tiles, t);
      if (!q) {
        report.ok = false;
        continue;
      }
      auto [sx, sy] = *q;
      bool broken = false;
      auto hx = trace(x, y, sx, 0, sy, broken);
      auto vy = trace(x, y, 0, sy, sx, broken);
      if (broken) {
        report.ok = false;
        continue;
      }
      // The cross reached along each leg must turn toward the frame.
      if (hx) {
        auto qh = corner_quadrant(tiles, p.at(hx->x, hx->y));
        if (!qh || *qh != std::pair{-sx, sy}) report.ok = false;
      }
      if (vy) {
        auto qv = corner_quadrant(tiles, p.at(vy->x, vy->y));
        if (!qv || *qv != std::pair{sx, -sy}) report.ok = false;
      }
      if (!hx || !vy) continue;
      int side = std::abs(hx->x - x);
      if (std::abs(vy->y - y) != side) {
        report.ok = false;
        continue;
      }
      // Count each frame once, from its lower-left corner.
      if (sx == 1 && sy == 1) {
        bool far_broken = false;
        auto top = trace(vy->x, vy->y, 1, 0, -1, far_broken);
        auto right = trace(hx->x, hx->y, 0, 1, -1, far_broken);
        if (far_broken || !top || !right || *top != *right || top->x != x + side) {
          report.ok = false;
          continue;
        }
        ++frames_by_size[side];
      }
    }
  }

  const int min_extent = std::min(p.width(), p.height());
  for (int k = 1; k <= n; ++k) {
    int side = 1 << k;
    report.frames_per_level[k - 1] = frames_by_size[side];
    // Frames of side 2^k recur with period 2^(k+1); a window of extent
    // 3 * 2^k always holds one.
    if (min_extent < 3 * side) {
      report.vacuous = true;
    } else if (frames_by_size[side] == 0) {
      report.ok = false;
    }
  }
  for (const auto& [side, count] : frames_by_size) {
    if (side < 2 || (side & (side - 1)) != 0) report.ok = false;
  }
  return report;
}

bool anchor_crosses_period4(const Patch& p) {
  const auto o = p.origin();
  for (int y = o.y; y < o.y + p.height(); ++y) {
    for (int x = o.x; x < o.x + p.width(); ++x) {
      if (!p.on_anchor(x, y)) continue;
      if (p.contains(x + 4, y) && p.at(x + 4, y) != p.at(x, y)) return false;
      if (p.contains(x, y + 4) && p.at(x, y + 4) != p.at(x, y)) return false;
    }
  }
  return true;
}

std::string describe(const FaultRowClass& c) {
  std::string s = c.axis == Axis::horizontal ? "horizontal" : "vertical";
  s += c.axis == Axis::horizontal ? (c.direction > 0 ? " east" : " west")
                                  : (c.direction > 0 ? " north" : " south");
  if (c.companion_side == 0) {
    s += ", no companion";
  } else if (c.axis == Axis::horizontal) {
    s += c.companion_side > 0 ? ", companion above" : ", companion below";
  } else {
    s += c.companion_side > 0 ? ", companion right" : ", companion left";
  }
  return s;
}

std::optional<FaultRowClass> line_class(const TileSet& tiles, int tile, Axis axis) {
  if (tiles.is_cross(tile)) return std::nullopt;
  const Side forward = axis == Axis::horizontal ? Side::east : Side::north;
  const Side back = axis == Axis::horizontal ? Side::west : Side::south;
  auto arrow = principal_arrow(tiles, tile, forward);
  auto arrow_back = principal_arrow(tiles, tile, back);
  if (!arrow || !arrow_back || *arrow == Arrow::none || *arrow == *arrow_back) return std::nullopt;
  FaultRowClass cls;
  cls.axis = axis;
  cls.direction = *arrow == Arrow::out ? 1 : -1;
  int companions = 0;
  for (const auto& m : tiles.edge(tile, forward).marks()) {
    if (m.color == LineColor::secondary) {
      ++companions;
      cls.companion_side = m.offset;
    }
  }
  cls.multiplicity = 1 + companions;
  cls.example_tile = tile;
  return cls;
}

std::vector<FaultRowClass> enumerate_fault_rows(const TileSet& tiles, int length, int margin,
                                                Axis axis) {
  if (length < 4 || margin < 1) {
    throw PreconditionError("patch-engine", "enumerate_fault_rows", "length >= 4 and margin >= 1 required");
  }
  const bool horiz = axis == Axis::horizontal;
  auto along = [&](int a, int b) {
    return horiz ? tiles.matches_horizontal(a, b) : tiles.matches_vertical(a, b);
  };
  std::vector<int> candidates_tiles;
  for (int t = 0; t < tiles.size(); ++t) {
    if (!tiles.is_cross(t)) candidates_tiles.push_back(t);
  }

  // Period-4 words closing up cyclically.
  std::vector<std::array<int, 4>> words;
  for (int a : candidates_tiles) {
    for (int b : candidates_tiles) {
      if (!along(a, b)) continue;
      for (int c : candidates_tiles) {
        if (!along(b, c)) continue;
        for (int d : candidates_tiles) {
          if (along(c, d) && along(d, a)) words.push_back({a, b, c, d});
        }
      }
    }
  }

  // The strip sits on the line through the origin along the axis, which
  // misses the anchor class; `margin` rows (columns) on each side.
  const int across = 2 * margin + 1;
  const int w = horiz ? length : across;
  const int h = horiz ? across : length;
  const LatticePoint origin = horiz ? LatticePoint{0, -margin} : LatticePoint{-margin, 0};
  const Domain crosses = cross_mask(tiles);

  std::map<std::tuple<int, int, int>, FaultRowClass> classes;
  for (const auto& word : words) {
    GridSolver solver(tiles, w, h);
    Patch shape(origin, w, h);
    bool ok = true;
    for (int y = 0; y < h && ok; ++y) {
      for (int x = 0; x < w && ok; ++x) {
        if (shape.on_anchor(origin.x + x, origin.y + y)) ok = solver.restrict(x, y, crosses);
      }
    }
    for (int i = 0; i < length && ok; ++i) {
      int t = word[i % 4];
      ok = horiz ? solver.restrict(i, margin, Domain{1} << t) : solver.restrict(margin, i, Domain{1} << t);
    }
    if (!ok) continue;
    auto outcome = solver.search(0, 2000000);
    if (outcome == SearchOutcome::node_limit) {
      throw NonConvergenceError("patch-engine", "enumerate_fault_rows", "extension search did not finish");
    }
    if (outcome != SearchOutcome::solved) continue;

    int t = word[0];
    auto cls = line_class(tiles, t, axis);
    if (!cls) {
      throw ValidationError("patch-engine", "enumerate_fault_rows", "strip without a through principal line");
    }
    auto key = std::tuple{cls->direction, cls->multiplicity, cls->companion_side};
    auto it = classes.find(key);
    if (it == classes.end() || t < it->second.example_tile) classes[key] = *cls;
  }

  std::vector<FaultRowClass> out;
  for (const auto& [key, cls] : classes) out.push_back(cls);
  return out;
}

}  // namespace robinson
