#pragma once

// SVG drawings of tiles, patches and overlapping rule entries. Principal
// lines are blue, secondary lines red; rule entries shade the footprint of
// the inflated tile gray.

#include <string>

#include "robinson/patch.hpp"
#include "robinson/substitution.hpp"
#include "robinson/tiles.hpp"

namespace robinson {

struct SvgStyle {
  int cell = 24;  // pixels per unit tile
  bool grid = true;
  std::string principal = "#1f4fd1";
  std::string secondary = "#d11f1f";
  std::string shade = "#c8c8c8";
};

std::string render_tile(const TileSet& tiles, int tile, const SvgStyle& style = {});
std::string render_patch(const TileSet& tiles, const Patch& p, const SvgStyle& style = {});
// The 3x3 image of a doubled tile, drawn in unit tiles.
std::string render_rule_entry(const TileSet& tiles, const DoubledCatalog& cat, const OverlapRule& r, int tile,
                              const SvgStyle& style = {});

}  // namespace robinson
