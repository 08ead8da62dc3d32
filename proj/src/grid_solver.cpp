#include "grid_solver.hpp"

#include <bit>
#include <random>

#include "robinson/errors.hpp"

namespace robinson::detail {

GridSolver::GridSolver(const TileSet& tiles, int width, int height)
    : width_(width), height_(height), tile_count_(tiles.size()) {
  if (tile_count_ > 64) {
    throw ValidationError("patch-engine", "generate_patch", "at most 64 oriented tiles supported");
  }
  right_of_.assign(tile_count_, 0);
  left_of_.assign(tile_count_, 0);
  above_of_.assign(tile_count_, 0);
  below_of_.assign(tile_count_, 0);
  for (int a = 0; a < tile_count_; ++a) {
    for (int b = 0; b < tile_count_; ++b) {
      if (tiles.matches_horizontal(a, b)) {
        right_of_[a] |= Domain{1} << b;
        left_of_[b] |= Domain{1} << a;
      }
      if (tiles.matches_vertical(a, b)) {
        above_of_[a] |= Domain{1} << b;
        below_of_[b] |= Domain{1} << a;
      }
    }
  }
  Domain all = tile_count_ == 64 ? ~Domain{0} : (Domain{1} << tile_count_) - 1;
  domains_.assign(static_cast<std::size_t>(width) * height, all);
  queued_.assign(domains_.size(), 0);
}

Domain GridSolver::support(Domain d, const std::vector<Domain>& table) const {
  Domain out = 0;
  while (d) {
    int t = std::countr_zero(d);
    d &= d - 1;
    out |= table[t];
  }
  return out;
}

bool GridSolver::set_domain(int c, Domain d) {
  if (d == domains_[c]) return true;
  trail_.push_back({c, domains_[c]});
  domains_[c] = d;
  return d != 0;
}

bool GridSolver::restrict(int x, int y, Domain mask) {
  int c = cell(x, y);
  return set_domain(c, domains_[c] & mask);
}

bool GridSolver::propagate(std::vector<int>& queue) {
  for (int c : queue) queued_[c] = 1;
  bool ok = true;
  while (!queue.empty()) {
    int c = queue.back();
    queue.pop_back();
    queued_[c] = 0;
    if (!ok) continue;
    int x = c % width_, y = c / width_;
    struct Neighbor {
      int dx, dy;
      const std::vector<Domain>* table;
    };
    const Neighbor neighbors[4] = {
        {1, 0, &right_of_}, {-1, 0, &left_of_}, {0, 1, &above_of_}, {0, -1, &below_of_}};
    for (const auto& n : neighbors) {
      int nx = x + n.dx, ny = y + n.dy;
      if (nx < 0 || ny < 0 || nx >= width_ || ny >= height_) continue;
      int nc = cell(nx, ny);
      Domain reduced = domains_[nc] & support(domains_[c], *n.table);
      if (reduced != domains_[nc]) {
        if (!set_domain(nc, reduced)) {
          ok = false;
          break;
        }
        if (!queued_[nc]) {
          queued_[nc] = 1;
          queue.push_back(nc);
        }
      }
    }
  }
  return ok;
}

bool GridSolver::propagate_all() {
  std::vector<int> queue(domains_.size());
  for (std::size_t i = 0; i < queue.size(); ++i) queue[i] = static_cast<int>(i);
  for (Domain d : domains_) {
    if (d == 0) return false;
  }
  return propagate(queue);
}

void GridSolver::undo_to(std::size_t mark) {
  while (trail_.size() > mark) {
    domains_[trail_.back().cell] = trail_.back().previous;
    trail_.pop_back();
  }
}

SearchOutcome GridSolver::search(std::uint64_t seed, std::uint64_t node_limit) {
  const int n = static_cast<int>(domains_.size());
  std::mt19937_64 rng(seed);
  std::vector<int> rotation(n);
  for (auto& r : rotation) r = static_cast<int>(rng() % static_cast<std::uint64_t>(tile_count_));

  if (!propagate_all()) return SearchOutcome::exhausted;

  struct Frame {
    std::size_t trail_mark;
    Domain remaining;
  };
  std::vector<Frame> stack;
  stack.reserve(n);
  std::vector<int> queue;
  nodes_ = 0;

  auto next_value = [&](int c, Domain& remaining) -> int {
    // First tile at or after the cell's rotation offset, wrapping around.
    Domain high = remaining & (~Domain{0} << rotation[c]);
    Domain pick = high ? high : remaining;
    int t = std::countr_zero(pick);
    remaining &= ~(Domain{1} << t);
    return t;
  };

  int c = 0;
  stack.push_back({trail_.size(), domains_[0]});
  while (true) {
    if (c == n) break;
    Frame& f = stack.back();
    undo_to(f.trail_mark);
    if (f.remaining == 0) {
      stack.pop_back();
      if (stack.empty()) return SearchOutcome::exhausted;
      --c;
      continue;
    }
    if (++nodes_ > node_limit) {
      undo_to(stack.front().trail_mark);
      return SearchOutcome::node_limit;
    }
    int t = next_value(c, f.remaining);
    set_domain(c, Domain{1} << t);
    queue.clear();
    queue.push_back(c);
    if (!propagate(queue)) continue;
    ++c;
    if (c < n) stack.push_back({trail_.size(), domains_[c]});
  }
  solution_.assign(n, -1);
  for (int i = 0; i < n; ++i) solution_[i] = std::countr_zero(domains_[i]);
  return SearchOutcome::solved;
}

}  // namespace robinson::detail
