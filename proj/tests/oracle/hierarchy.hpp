#pragma once

// Closed-form Robinson tiling used as an oracle: the tile at (x, y) follows
// from the 2-adic valuations of the coordinates, with no search involved.
// Crosses sit where v2(x) == v2(y); a level-k cross spawns arms along the
// row or column of larger valuation, and the secondary frames of side 2^k are
// centered on the points congruent to 2^k modulo 2^(k+1).

#include <array>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "robinson/patch.hpp"
#include "robinson/tiles.hpp"

namespace oracle {

using robinson::Arrow;
using robinson::LineColor;
using robinson::LineMark;
using robinson::Side;

inline int v2(std::int64_t n) {
  if (n == 0) throw std::invalid_argument("oracle: v2(0)");
  int k = 0;
  while (n % 2 == 0) n /= 2, ++k;
  return k;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
inline std::int64_t pos_mod(std::int64_t a, std::int64_t b) { return ((a % b) + b) % b; }

struct Marks {
  std::vector<LineMark> side[4];

  void add(Side s, int offset, LineColor c, Arrow a) {
    auto& v = side[robinson::index(s)];
    for (const auto& m : v) {
      if (m.offset == offset && m.color == c) return;
    }
    v.push_back({offset, c, a});
  }
};

// Secondary marks from frames of levels 1..levels near (x, y), in quarter units.
inline void add_frames(Marks& m, std::int64_t x, std::int64_t y, int levels) {
  const std::int64_t X = 4 * x, Y = 4 * y;
  for (int k = 1; k <= levels; ++k) {
    const std::int64_t h = std::int64_t{1} << (k - 1);
    const std::int64_t p = std::int64_t{1} << (k + 1);
    const std::int64_t q = std::int64_t{1} << k;
    for (std::int64_t cx = floor_div(x - 2 * h, p) * p - p + q; cx < x + 2 * h + p; cx += p) {
      for (std::int64_t cy = floor_div(y - 2 * h, p) * p - p + q; cy < y + 2 * h + p; cy += p) {
        std::int64_t lox = 4 * (cx - h) + 1, hix = 4 * (cx + h) - 1;
        std::int64_t loy = 4 * (cy - h) + 1, hiy = 4 * (cy + h) - 1;
        for (std::int64_t yy : {loy, hiy}) {
          if (std::llabs(yy - Y) >= 2) continue;
          if (lox <= X - 2 && X - 2 <= hix) m.add(Side::west, static_cast<int>(yy - Y), LineColor::secondary, Arrow::none);
          if (lox <= X + 2 && X + 2 <= hix) m.add(Side::east, static_cast<int>(yy - Y), LineColor::secondary, Arrow::none);
        }
        for (std::int64_t xx : {lox, hix}) {
          if (std::llabs(xx - X) >= 2) continue;
          if (loy <= Y - 2 && Y - 2 <= hiy) m.add(Side::south, static_cast<int>(xx - X), LineColor::secondary, Arrow::none);
          if (loy <= Y + 2 && Y + 2 <= hiy) m.add(Side::north, static_cast<int>(xx - X), LineColor::secondary, Arrow::none);
        }
      }
    }
  }
}

inline robinson::EdgeSet edges_at(std::int64_t x, std::int64_t y, int levels = 14) {
  Marks m;
  const int vx = v2(x), vy = v2(y);
  if (vx == vy) {
    for (Side s : robinson::kSides) m.add(s, 0, LineColor::principal, Arrow::out);
  } else {
    // Arms point away from the cross of the larger valuation's level.
    const bool vertical = vx > vy;
    const int k = vertical ? vx : vy;
    const std::int64_t p = std::int64_t{1} << (k + 1), q = std::int64_t{1} << k;
    const std::int64_t along = vertical ? y : x;
    std::int64_t c = along - pos_mod(along - q, p);
    if (along - c > q) c += p;
    const Side away = vertical ? (along < c ? Side::south : Side::north) : (along < c ? Side::west : Side::east);
    m.add(away, 0, LineColor::principal, Arrow::out);
    m.add(robinson::opposite(away), 0, LineColor::principal, Arrow::in);
    for (Side s : vertical ? std::array{Side::east, Side::west} : std::array{Side::north, Side::south}) {
      m.add(s, 0, LineColor::principal, Arrow::in);
    }
  }
  add_frames(m, x, y, levels);
  robinson::EdgeSet e;
  for (int i = 0; i < 4; ++i) e[i] = robinson::EdgeSignature(m.side[i]);
  return e;
}

// Oriented tile index at (x, y); throws if the construction leaves the set.
inline int tile_at(const robinson::TileSet& tiles, std::int64_t x, std::int64_t y) {
  int t = tiles.find(edges_at(x, y));
  if (t < 0) throw std::logic_error("oracle: no oriented tile matches the construction");
  return t;
}

// A generic offset, far from the coordinate axes, with small valuations.
inline constexpr std::int64_t kOffset = (1 << 13) + (1 << 11) + (1 << 9) + 3 * (1 << 6);

// Window of the oracle tiling whose local cell (i, j) is (x0 + i, y0 + j).
// x0 and y0 must be even so the local anchor class is odd/odd.
inline robinson::Patch patch(const robinson::TileSet& tiles, std::int64_t x0, std::int64_t y0, int w, int h) {
  if (x0 % 2 || y0 % 2) throw std::invalid_argument("oracle: window offset must be even");
  robinson::Patch p({0, 0}, w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) p.set(i, j, tile_at(tiles, x0 + i, y0 + j));
  }
  return p;
}

}  // namespace oracle
