#pragma once

// Robinson prototiles: edge decorations, the dihedral action on unit
// squares, and the edge-matching predicate.

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace robinson {

enum class Side : std::uint8_t { north = 0, east = 1, south = 2, west = 3 };

inline constexpr std::array<Side, 4> kSides{Side::north, Side::east, Side::south, Side::west};

constexpr int index(Side s) noexcept { return static_cast<int>(s); }
constexpr Side opposite(Side s) noexcept { return static_cast<Side>((index(s) + 2) % 4); }
char side_letter(Side s) noexcept;

enum class LineColor : std::uint8_t { principal, secondary };
// Secondary (red) lines are undirected and carry Arrow::none.
enum class Arrow : std::uint8_t { out, in, none };

std::string_view to_string(LineColor c) noexcept;
std::string_view to_string(Arrow a) noexcept;

// One line crossing an edge. The offset is the quarter-edge track in
// {-1, 0, +1}, measured along the global axis parallel to the edge (x for
// north/south edges, y for east/west edges), so the two edges of an abutting
// pair use the same coordinate.
struct LineMark {
  int offset = 0;
  LineColor color = LineColor::principal;
  Arrow arrow = Arrow::none;

  friend auto operator<=>(const LineMark&, const LineMark&) = default;
};

class EdgeSignature {
 public:
  EdgeSignature() = default;
  // Sorts by offset and rejects out-of-range tracks, duplicate (offset, color)
  // pairs and arrow/color combinations that cannot occur.
  explicit EdgeSignature(std::vector<LineMark> marks);

  const std::vector<LineMark>& marks() const noexcept { return marks_; }

  friend auto operator<=>(const EdgeSignature&, const EdgeSignature&) = default;

 private:
  std::vector<LineMark> marks_;
};

// a is the east (resp. north) edge of one tile, b the west (resp. south) edge
// of the tile abutting it. Lines must continue, and each directed join has
// exactly one arrow head.
bool edges_match(const EdgeSignature& a, const EdgeSignature& b);

using EdgeSet = std::array<EdgeSignature, 4>;

// Element of the symmetry group of the square: the optional reflection
// x -> -x is applied first, then `rotation` counterclockwise quarter turns.
struct D4Element {
  int rotation = 0;
  bool reflected = false;

  std::pair<int, int> apply(int x, int y) const noexcept;
  D4Element inverse() const noexcept;

  // (g * h) acts as g after h.
  friend D4Element operator*(const D4Element& g, const D4Element& h) noexcept;
  friend auto operator<=>(const D4Element&, const D4Element&) = default;
};

// All eight elements, ordered lexicographically by (rotation, reflected).
const std::array<D4Element, 8>& all_symmetries() noexcept;

std::string to_string(const D4Element& g);

EdgeSet transform_edges(const EdgeSet& edges, const D4Element& g);

struct Prototile {
  std::string id;
  EdgeSet edges;
  bool is_cross = false;

  friend bool operator==(const Prototile&, const Prototile&) = default;
};

struct OrientedTile {
  int prototile = 0;   // index into the prototile list
  D4Element symmetry;  // least (rotation, reflected) in its stabilizer coset

  friend auto operator<=>(const OrientedTile&, const OrientedTile&) = default;
};

std::vector<D4Element> stabilizer(const Prototile& p);
OrientedTile canonical(const std::vector<Prototile>& tiles, int prototile, const D4Element& g);
OrientedTile apply_symmetry(const std::vector<Prototile>& tiles, const D4Element& g,
                            const OrientedTile& t);
EdgeSet oriented_edges(const std::vector<Prototile>& tiles, const OrientedTile& t);

// Canonical representatives of every placement up to translation, sorted by
// prototile id and then by canonical symmetry.
std::vector<OrientedTile> oriented_orbit(const std::vector<Prototile>& tiles);

std::vector<Prototile> parse_tileset(std::string_view json_text);
std::vector<Prototile> load_tileset(const std::filesystem::path& path);
std::string serialize_tileset(const std::vector<Prototile>& tiles);

// A validated tile set with its oriented tiles enumerated and the matching
// relation tabulated. Oriented tiles are addressed by index.
class TileSet {
 public:
  explicit TileSet(std::vector<Prototile> prototiles);

  const std::vector<Prototile>& prototiles() const noexcept { return prototiles_; }
  const std::vector<OrientedTile>& oriented() const noexcept { return oriented_; }
  int size() const noexcept { return static_cast<int>(oriented_.size()); }

  const EdgeSet& edges(int tile) const { return edges_.at(tile); }
  const EdgeSignature& edge(int tile, Side s) const { return edges_.at(tile)[index(s)]; }
  bool is_cross(int tile) const { return prototiles_[oriented_.at(tile).prototile].is_cross; }
  int index_of(const OrientedTile& t) const;
  // Index of the oriented tile with exactly these edges, or -1.
  int find(const EdgeSet& edges) const;
  int apply(const D4Element& g, int tile) const { return action_.at(tile)[g_index(g)]; }
  std::string label(int tile) const;

  bool matches_horizontal(int left, int right) const { return horizontal_[left * size() + right]; }
  bool matches_vertical(int below, int above) const { return vertical_[below * size() + above]; }

  // Sizes of the symmetry orbits, one per prototile, in prototile order.
  std::vector<int> orbit_sizes() const;

 private:
  static int g_index(const D4Element& g) noexcept { return g.rotation * 2 + (g.reflected ? 1 : 0); }

  std::vector<Prototile> prototiles_;
  std::vector<OrientedTile> oriented_;
  std::vector<EdgeSet> edges_;
  std::vector<std::array<int, 8>> action_;
  std::vector<bool> horizontal_;
  std::vector<bool> vertical_;
};

// Straight unit steps of a tile's drawn decoration in quarter units relative
// to the tile center; principal steps are directed (from -> to follows the
// arrow), secondary steps are stored with from < to.
struct DecorationStep {
  LineColor color = LineColor::principal;
  std::pair<int, int> from;
  std::pair<int, int> to;

  friend auto operator<=>(const DecorationStep&, const DecorationStep&) = default;
};

std::vector<DecorationStep> decoration_steps(const EdgeSet& edges);

}  // namespace robinson
