#pragma once

// Finite rectangular patches of tiles on the integer lattice, Robinson
// legality, patch generation by constraint search, the frame hierarchy check
// and fault-row enumeration.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robinson/tiles.hpp"

namespace robinson {

struct LatticePoint {
  int x = 0;
  int y = 0;

  LatticePoint parity() const noexcept { return {((x % 2) + 2) % 2, ((y % 2) + 2) % 2}; }
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

struct UnitTiles {};
struct DoubledTiles {};

// Rectangular window [origin.x, origin.x + width) x [origin.y, origin.y + height)
// holding tile indices; -1 marks an empty cell. Rows run bottom to top.
template <typename Kind>
class Grid {
 public:
  Grid() = default;
  Grid(LatticePoint origin, int width, int height, LatticePoint parity_anchor = {1, 1})
      : origin_(origin),
        width_(width),
        height_(height),
        parity_anchor_(parity_anchor.parity()),
        cells_(static_cast<std::size_t>(width) * height, -1) {}

  LatticePoint origin() const noexcept { return origin_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  LatticePoint parity_anchor() const noexcept { return parity_anchor_; }
  bool empty() const noexcept { return cells_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= origin_.x && y >= origin_.y && x < origin_.x + width_ && y < origin_.y + height_;
  }
  int at(int x, int y) const { return cells_.at(offset(x, y)); }
  void set(int x, int y, int tile) { cells_.at(offset(x, y)) = tile; }
  // -1 when outside the window.
  int get(int x, int y) const noexcept { return contains(x, y) ? cells_[offset(x, y)] : -1; }

  bool on_anchor(int x, int y) const noexcept {
    return LatticePoint{x, y}.parity() == parity_anchor_;
  }

  Grid window(LatticePoint origin, int width, int height) const {
    Grid out(origin, width, height, parity_anchor_);
    for (int y = origin.y; y < origin.y + height; ++y) {
      for (int x = origin.x; x < origin.x + width; ++x) out.set(x, y, at(x, y));
    }
    return out;
  }

  const std::vector<int>& cells() const noexcept { return cells_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return static_cast<std::size_t>(y - origin_.y) * width_ + (x - origin_.x);
  }

  LatticePoint origin_{};
  int width_ = 0;
  int height_ = 0;
  LatticePoint parity_anchor_{1, 1};
  std::vector<int> cells_;
};

using Patch = Grid<UnitTiles>;
using DoubledPatch = Grid<DoubledTiles>;

// Matching rule on every interior abutting pair plus crosses on the anchor
// parity class. Empty cells make a patch illegal.
bool legal(const TileSet& tiles, const Patch& p);

struct GenerateOptions {
  int width = 1;
  int height = 1;
  int margin = 4;
  std::uint64_t seed = 0;
  // Search nodes allowed per restart before re-seeding the value order;
  // 0 picks three times the number of cells.
  std::uint64_t restart_nodes = 0;
  int max_restarts = 256;
};

// Legal (width + 2 margin) x (height + 2 margin) patch found by backtracking,
// trimmed to the central window whose lower-left cell is (0, 0).
Patch generate_patch(const TileSet& tiles, const GenerateOptions& opts);
// The untrimmed search result.
Patch generate_full_patch(const TileSet& tiles, const GenerateOptions& opts);

// The tiles on the spacing-2 sublattice whose odd points carry the next
// level's crosses, as a patch with the default anchor: cell (i, j) holds the
// unit tile at 2 (i, j) + shift, shift in [0, 4)^2, so even cells are the
// level-1 centers.
struct Deflation {
  Patch patch;
  LatticePoint shift;
};

// nullopt unless exactly one of the four candidate sublattices is legal.
std::optional<Deflation> deflate(const TileSet& tiles, const Patch& p);

// Unique legal deflations at every level until the patch is smaller than
// min_extent. Patches crossed by a defect line fail at the level of the line.
bool hierarchical(const TileSet& tiles, const Patch& p, int min_extent = 8);

// generate_patch with seeds seed, seed + 1, ... until the window
// is hierarchical; ValidationError after `attempts` seeds.
Patch generate_hierarchical_patch(const TileSet& tiles, const GenerateOptions& opts, int attempts = 256);

struct FrameReport {
  bool ok = true;
  bool vacuous = false;  // patch too small for the requested level
  std::vector<int> frames_per_level;  // closed frames found, for k = 1..n
};

// Closed square frames of secondary lines with corners at crosses, of every
// side length 2^k with 1 <= k <= n (and the smallest crosses for n = 0).
FrameReport verify_frame_hierarchy(const TileSet& tiles, const Patch& p, int n);

// Oriented cross types on the anchor class repeat with period 4 in both
// directions.
bool anchor_crosses_period4(const Patch& p);

enum class Axis { horizontal, vertical };

struct FaultRowClass {
  Axis axis = Axis::horizontal;
  int multiplicity = 1;   // 1: single principal line, 2: with a secondary companion
  int companion_side = 0; // -1 below/left, +1 above/right, 0 none
  int direction = 1;      // +1 east/north, -1 west/south
  int example_tile = -1;  // tile of the strip (all strip tiles agree)

  friend auto operator<=>(const FaultRowClass&, const FaultRowClass&) = default;
};

std::string describe(const FaultRowClass& c);

// Class of the principal line running through a non-cross tile along the
// axis; nullopt if the tile has no such line.
std::optional<FaultRowClass> line_class(const TileSet& tiles, int tile, Axis axis);

// Cross-free strips of length `length`, horizontally periodic with period 4,
// that extend to a legal patch with `margin` rows on both sides, classified
// by the decoration of the separating line.
std::vector<FaultRowClass> enumerate_fault_rows(const TileSet& tiles, int length, int margin,
                                                Axis axis = Axis::horizontal);

}  // namespace robinson
