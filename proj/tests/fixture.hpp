#pragma once

// The shipped tile set and everything derived from it, computed once per
// test binary.

#include <filesystem>

#include "robinson/ap.hpp"
#include "robinson/substitution.hpp"
#include "robinson/tiles.hpp"

#ifndef ROBINSON_DATA_DIR
#define ROBINSON_DATA_DIR "data"
#endif

namespace testing {

inline std::filesystem::path tileset_path() { return std::filesystem::path(ROBINSON_DATA_DIR) / "robinson.tiles.json"; }

struct Fixture {
  std::vector<robinson::Prototile> prototiles = robinson::load_tileset(tileset_path());
  robinson::TileSet tiles{prototiles};
  robinson::Derivation rules = robinson::derive_rules(tiles);

  robinson::DoubledPatch seed(int size, std::uint64_t seed = 0) const {
    robinson::GenerateOptions g;
    g.width = g.height = size;
    g.margin = 8;
    g.seed = seed;
    return robinson::to_doubled(rules.catalog, robinson::generate_hierarchical_patch(tiles, g));
  }

  robinson::AdjacencyTables adjacency = robinson::adjacency_tables(rules.normal, seed(8));
  robinson::CheckResult border = robinson::check_border_forcing(rules.normal, rules.overlap, adjacency);
  robinson::CellComplex complex = robinson::build_complex(rules.catalog.size(), adjacency, border);
  robinson::ApproximantCohomology approximant = robinson::approximant_cohomology(complex);
  robinson::InducedAction action = robinson::induced_maps(rules.normal, complex, approximant);
  robinson::CohomologyResult cohomology = robinson::hull_cohomology(approximant, action);
};

inline const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace testing
