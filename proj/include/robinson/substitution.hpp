#pragma once

// Doubled tiles (even/even tiles with their collar), the overlapping 3x3
// substitution derived by two-level composition, the normal 2x2 rule taken
// at the upper-right corner, and the checks run on them.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "robinson/patch.hpp"
#include "robinson/tiles.hpp"

namespace robinson {

// An even/even unit tile together with its eight neighbors; the neighbors
// carry the half-unit collar and decide which of the two classes over the
// center tile this is. Cell (dx, dy), dx, dy in {-1, 0, 1}, is stored at
// index (dy + 1) * 3 + (dx + 1).
using Neighborhood = std::array<int, 9>;

constexpr int nbr_index(int dx, int dy) noexcept { return (dy + 1) * 3 + (dx + 1); }

struct DoubledTile {
  int id = 0;
  Neighborhood content{};
  int base = 0;  // the center unit tile

  int at(int dx, int dy) const { return content[nbr_index(dx, dy)]; }
  friend bool operator==(const DoubledTile&, const DoubledTile&) = default;
};

class DoubledCatalog {
 public:
  DoubledCatalog() = default;
  // Assigns ids in the order (base, content).
  explicit DoubledCatalog(std::vector<Neighborhood> contents);

  int size() const noexcept { return static_cast<int>(tiles_.size()); }
  const std::vector<DoubledTile>& tiles() const noexcept { return tiles_; }
  const DoubledTile& operator[](int id) const { return tiles_.at(id); }
  int find(const Neighborhood& n) const;

  // Image of a doubled tile under a symmetry, or -1 if not in the catalog.
  int apply(const TileSet& tiles, const D4Element& g, int id) const;

  friend bool operator==(const DoubledCatalog& a, const DoubledCatalog& b) { return a.tiles_ == b.tiles_; }

 private:
  std::vector<DoubledTile> tiles_;
  std::map<Neighborhood, int> index_;
};

// Neighborhood around (x, y); nullopt unless all nine cells are filled.
std::optional<Neighborhood> neighborhood(const Patch& p, int x, int y, int step = 1);

// Unit offset of doubled-tile centers: the parity class opposite the anchor.
LatticePoint doubled_center_parity(const Patch& p);

// Distinct neighborhoods of all even/even cells whose full neighborhood lies
// inside some patch of the ensemble.
DoubledCatalog derive_doubled_tiles(const TileSet& tiles, const std::vector<Patch>& ensemble);

// Doubled tile at q sits on the unit center 2q + doubled_center_parity(p).
// Covers every center whose neighborhood fits; throws CoverageError for an
// unknown neighborhood.
DoubledPatch to_doubled(const DoubledCatalog& cat, const Patch& p);
// Unit patch covered by the doubled tiles (edge 2 each, overlapping collars).
// Throws ValidationError if neighboring collars disagree.
Patch to_unit(const DoubledCatalog& cat, const DoubledPatch& d);
// Neighboring doubled tiles agree on their shared collar cells.
bool legal_doubled(const DoubledCatalog& cat, const DoubledPatch& d);

// Image cell (dx, dy) of t, dx, dy in {-1, 0, 1}; index as nbr_index.
struct OverlapRule {
  std::vector<std::array<int, 9>> table;

  int image(int t, int dx, int dy) const { return table.at(t)[nbr_index(dx, dy)]; }
  int size() const noexcept { return static_cast<int>(table.size()); }
};

// The 2x2 block at the upper-right corner of the overlapping image. Cell
// (i, j), i, j in {0, 1}, i = 1 the right column, j = 1 the top row, stored
// at j * 2 + i.
struct NormalRule {
  std::vector<std::array<int, 4>> table;
  static constexpr const char* anchor = "upper-right";

  int image(int t, int i, int j) const { return table.at(t)[j * 2 + i]; }
  int size() const noexcept { return static_cast<int>(table.size()); }
};

// Level-1 doubled tiles are read off the sublattice of spacing 2 (the
// deflated tiling) and mapped to the 3x3 patch of level-0 doubled tiles they
// cover. Patches whose spacing-2 sublattice is not a legal tiling are skipped.
OverlapRule derive_overlapping_rule(const TileSet& tiles, const DoubledCatalog& cat,
                                    const std::vector<Patch>& ensemble);

// Pairs of the doubled tiles that occur side by side, and 2x2 blocks
// (stored as {lower-left, lower-right, upper-left, upper-right}).
struct AdjacencyTables {
  std::set<std::pair<int, int>> horizontal;  // (left, right)
  std::set<std::pair<int, int>> vertical;    // (below, above)
  std::set<std::array<int, 4>> quadruples;

  bool empty() const noexcept { return horizontal.empty() && vertical.empty() && quadruples.empty(); }
  friend bool operator==(const AdjacencyTables&, const AdjacencyTables&) = default;
};

void harvest(const DoubledPatch& d, AdjacencyTables& into);

// Closure of the seed's pairs and blocks under the normal rule. Throws
// NonConvergenceError if the sets still grow after size^2 rounds.
AdjacencyTables adjacency_tables(const NormalRule& n, const DoubledPatch& seed);

struct Violation {
  std::string kind;  // "horizontal", "vertical", "corona-west", ...
  std::vector<int> tiles;
  std::string detail;
};

struct CheckResult {
  bool ok = true;
  bool warning = false;  // vacuous pass
  std::vector<Violation> violations;
};

CheckResult check_overlap_consistency(const OverlapRule& r, const AdjacencyTables& adj);

// D4 covariance: image(g t) = g image(t), cell by cell.
CheckResult check_covariance(const TileSet& tiles, const DoubledCatalog& cat, const OverlapRule& r);

// Every image center is an even/even tile whose diagonal neighbors are crosses.
bool image_centers_anchored(const TileSet& tiles, const DoubledCatalog& cat, const OverlapRule& r);

NormalRule to_normal_rule(const OverlapRule& r);

// For each tile t, the cells of the 1-corona of its normal image that the
// overlapping image of t also covers (the column left of the block and the
// row below it) must be what the normal images of the legal west, south and
// south-west neighbors of t put there.
CheckResult check_border_forcing(const NormalRule& n, const OverlapRule& r, const AdjacencyTables& adj);

using CountMatrix = std::vector<std::vector<std::int64_t>>;

struct SubstitutionMatrix {
  CountMatrix entries;  // entries[i][j]: occurrences of i in the image of j
  int primitivity_power = 0;
};

// Throws PrimitivityError if no power up to the size has all entries positive,
// ValidationError if a column sum is not 4.
SubstitutionMatrix substitution_matrix(const NormalRule& n);

// Doubled tile at q goes to the block whose upper-right tile sits at 2q.
DoubledPatch substitute_patch(const NormalRule& n, const DoubledPatch& p, int m);

struct EnsembleOptions {
  int patch_size = 48;
  int margin = 8;
  int initial_patches = 4;
  std::uint64_t seed = 0;
  int max_growths = 6;
};

struct Derivation {
  DoubledCatalog catalog;
  OverlapRule overlap;
  NormalRule normal;
  int ensemble_patches = 0;
};

// Doubles the ensemble until catalog and rule agree between two consecutive
// sizes and the rule is total; InstabilityError otherwise.
Derivation derive_rules(const TileSet& tiles, const EnsembleOptions& opts = {});

// FNV-1a 64 as 16 hex digits.
std::string fnv1a64(std::string_view text);
// fnv1a64 of the canonical serialization of the tile set.
std::string tileset_hash(const std::vector<Prototile>& prototiles);

std::string serialize_rules(const std::vector<Prototile>& prototiles, const Derivation& d);
// Throws ValidationError if the cache was built for another tile set.
Derivation parse_rules(const std::vector<Prototile>& prototiles, const std::string& text);

}  // namespace robinson
