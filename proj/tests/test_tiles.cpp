#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fixture.hpp"
#include "robinson/errors.hpp"

using namespace robinson;

namespace {

const TileSet& shipped() {
  static const TileSet ts(load_tileset(testing::tileset_path()));
  return ts;
}

std::string cross_only(const std::string& extra_edges) {
  return R"({"name": "t", "prototiles": [{"id": "c", "is_cross": true, "edges": {)" + extra_edges + "}}]}";
}

}  // namespace

TEST_CASE("shipped tile set has 28 oriented tiles") {
  // 28 tiles up to translation, from five prototiles.
  CHECK(shipped().prototiles().size() == 5);
  CHECK(shipped().size() == 28);
  CHECK(oriented_orbit(shipped().prototiles()).size() == 28);
}

TEST_CASE("orbit sizes follow the prototile symmetries") {
  auto sizes = shipped().orbit_sizes();
  CHECK(sizes == std::vector<int>{4, 4, 4, 8, 8});
  for (std::size_t i = 0; i < shipped().prototiles().size(); ++i) {
    CHECK(8 / stabilizer(shipped().prototiles()[i]).size() == static_cast<std::size_t>(sizes[i]));
  }
}

TEST_CASE("exactly one prototile is the cross") {
  int crosses = 0;
  for (int t = 0; t < shipped().size(); ++t) crosses += shipped().is_cross(t);
  CHECK(crosses == 4);
  CHECK(shipped().label(0) == "arm@r0");
}

TEST_CASE("D4 is a group acting on the oriented tiles") {
  const auto& g = all_symmetries();
  D4Element e{};
  for (const auto& a : g) {
    CHECK(a * e == a);
    CHECK(a * a.inverse() == e);
    for (const auto& b : g) {
      for (const auto& c : g) CHECK((a * b) * c == a * (b * c));
      for (int t = 0; t < shipped().size(); ++t) {
        CHECK(shipped().apply(a, shipped().apply(b, t)) == shipped().apply(a * b, t));
      }
    }
  }
}

TEST_CASE("symmetries preserve the matching relation") {
  const auto& ts = shipped();
  D4Element quarter{1, false};
  for (int a = 0; a < ts.size(); ++a) {
    for (int b = 0; b < ts.size(); ++b) {
      // A quarter turn carries a horizontal pair (a, b) to a vertical pair (a', b').
      CHECK(ts.matches_horizontal(a, b) == ts.matches_vertical(ts.apply(quarter, a), ts.apply(quarter, b)));
    }
  }
}

TEST_CASE("crosses never abut") {
  const auto& ts = shipped();
  for (int a = 0; a < ts.size(); ++a) {
    for (int b = 0; b < ts.size(); ++b) {
      if (ts.is_cross(a) && ts.is_cross(b)) {
        CHECK_FALSE(ts.matches_horizontal(a, b));
        CHECK_FALSE(ts.matches_vertical(a, b));
      }
    }
  }
}

TEST_CASE("every tile has some neighbor on each side") {
  const auto& ts = shipped();
  for (int a = 0; a < ts.size(); ++a) {
    bool right = false, above = false, left = false, below = false;
    for (int b = 0; b < ts.size(); ++b) {
      right |= ts.matches_horizontal(a, b);
      left |= ts.matches_horizontal(b, a);
      above |= ts.matches_vertical(a, b);
      below |= ts.matches_vertical(b, a);
    }
    CHECK((right && left && above && below));
  }
}

TEST_CASE("edge matching needs opposite arrows on principal lines") {
  EdgeSignature out({{0, LineColor::principal, Arrow::out}});
  EdgeSignature in({{0, LineColor::principal, Arrow::in}});
  EdgeSignature red({{0, LineColor::principal, Arrow::out}, {1, LineColor::secondary, Arrow::none}});
  CHECK(edges_match(out, in));
  CHECK_FALSE(edges_match(out, out));
  CHECK_FALSE(edges_match(out, red));
  CHECK_THROWS_AS(EdgeSignature({{2, LineColor::principal, Arrow::out}}), ValidationError);
  CHECK_THROWS_AS(EdgeSignature({{1, LineColor::secondary, Arrow::out}}), ValidationError);
}

TEST_CASE("serialization round-trips") {
  auto text = serialize_tileset(shipped().prototiles());
  auto again = parse_tileset(text);
  CHECK(again == shipped().prototiles());
  CHECK(serialize_tileset(again) == text);
  TileSet ts(again);
  CHECK(ts.size() == 28);
}

TEST_CASE("malformed tile sets are rejected") {
  CHECK_THROWS_AS(parse_tileset("{"), ParseError);
  CHECK_THROWS_AS(parse_tileset(R"({"prototiles": []})"), ValidationError);
  CHECK_THROWS_AS(parse_tileset(cross_only(R"("N": [{"offset": 0, "color": "principal", "arrow": "sideways"}],
      "E": [], "S": [], "W": [])")),
                  ValidationError);
  CHECK_THROWS_AS(parse_tileset(cross_only(R"("N": [], "E": [], "S": [])")), ValidationError);
  CHECK_THROWS_AS(load_tileset("/nonexistent/tiles.json"), ParseError);
}

TEST_CASE("decoration steps of the cross") {
  int cross = -1;
  for (int t = 0; t < shipped().size() && cross < 0; ++t) {
    if (shipped().is_cross(t)) cross = t;
  }
  auto steps = decoration_steps(shipped().edges(cross));
  int principal = 0, secondary = 0;
  for (const auto& s : steps) (s.color == LineColor::principal ? principal : secondary)++;
  // Four arms of two quarter steps, and a secondary corner.
  CHECK(principal == 8);
  CHECK(secondary > 0);
}
