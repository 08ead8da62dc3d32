#pragma once

// Backtracking search over a rectangular grid of tile variables with
// arc-consistency propagation of the matching relation. Internal to the
// patch engine.

#include <cstdint>
#include <optional>
#include <vector>

#include "robinson/tiles.hpp"

namespace robinson::detail {

using Domain = std::uint64_t;

enum class SearchOutcome { solved, exhausted, node_limit };

class GridSolver {
 public:
  GridSolver(const TileSet& tiles, int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  // Intersects the domain of a cell; returns false if it became empty.
  bool restrict(int x, int y, Domain mask);
  Domain domain(int x, int y) const { return domains_[cell(x, y)]; }

  // Establishes arc consistency on the whole grid; false on a wipe-out.
  bool propagate_all();

  // Row-major backtracking, tiles tried in canonical order rotated by a
  // per-cell offset drawn from `seed`.
  SearchOutcome search(std::uint64_t seed, std::uint64_t node_limit);

  // Valid after SearchOutcome::solved; row-major from the bottom row.
  const std::vector<int>& solution() const noexcept { return solution_; }
  std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  struct TrailEntry {
    int cell;
    Domain previous;
  };

  int cell(int x, int y) const noexcept { return y * width_ + x; }
  bool set_domain(int c, Domain d);
  bool propagate(std::vector<int>& queue);
  Domain support(Domain d, const std::vector<Domain>& table) const;
  void undo_to(std::size_t mark);

  int width_;
  int height_;
  int tile_count_;
  std::vector<Domain> right_of_, left_of_, above_of_, below_of_;
  std::vector<Domain> domains_;
  std::vector<TrailEntry> trail_;
  std::vector<char> queued_;
  std::vector<int> solution_;
  std::uint64_t nodes_ = 0;
};

}  // namespace robinson::detail
