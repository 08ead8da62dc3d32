#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "fixture.hpp"
#include "oracle/hierarchy.hpp"
#include "robinson/errors.hpp"

using namespace robinson;

namespace {

const testing::Fixture& fx() { return testing::fixture(); }

std::vector<Patch> oracle_ensemble() {
  std::vector<Patch> out;
  for (std::int64_t k = 0; k < 6; ++k) {
    out.push_back(oracle::patch(fx().tiles, oracle::kOffset + 46 * k, oracle::kOffset + 512 + 30 * k, 64, 64));
  }
  return out;
}

}  // namespace

TEST_CASE("56 doubled tiles, two over each even/even tile") {
  const auto& cat = fx().rules.catalog;
  CHECK(cat.size() == 56);
  std::map<int, int> per_base;
  for (const auto& t : cat.tiles()) ++per_base[t.base];
  CHECK(per_base.size() == 28);
  for (const auto& [base, n] : per_base) CHECK(n == 2);
  for (int id = 0; id < cat.size(); ++id) {
    CHECK(cat[id].id == id);
    CHECK(cat[id].at(0, 0) == cat[id].base);
    CHECK(cat.find(cat[id].content) == id);
    // Diagonal neighbors of an even/even tile are crosses.
    for (int dx : {-1, 1}) {
      for (int dy : {-1, 1}) CHECK(fx().tiles.is_cross(cat[id].at(dx, dy)));
    }
  }
}

TEST_CASE("oracle tiling yields the same catalog and overlapping rule") {
  auto ensemble = oracle_ensemble();
  auto cat = derive_doubled_tiles(fx().tiles, ensemble);
  CHECK(cat == fx().rules.catalog);
  auto rule = derive_overlapping_rule(fx().tiles, cat, ensemble);
  CHECK(rule.table == fx().rules.overlap.table);
}

TEST_CASE("derivation is stable under a larger ensemble") {
  EnsembleOptions big;
  big.initial_patches = 16;
  auto d = derive_rules(fx().tiles, big);
  CHECK(d.catalog == fx().rules.catalog);
  CHECK(d.overlap.table == fx().rules.overlap.table);
  CHECK(d.normal.table == fx().rules.normal.table);
}

TEST_CASE("doubled patches convert back to the unit patch") {
  auto p = oracle::patch(fx().tiles, oracle::kOffset, oracle::kOffset + 2, 21, 19);
  auto d = to_doubled(fx().rules.catalog, p);
  CHECK(legal_doubled(fx().rules.catalog, d));
  auto u = to_unit(fx().rules.catalog, d);
  int compared = 0;
  for (int y = u.origin().y; y < u.origin().y + u.height(); ++y) {
    for (int x = u.origin().x; x < u.origin().x + u.width(); ++x) {
      CHECK(u.at(x, y) == p.at(x, y));
      ++compared;
    }
  }
  CHECK(compared > 200);
}

TEST_CASE("image centers are anchored even/even tiles") {
  CHECK(image_centers_anchored(fx().tiles, fx().rules.catalog, fx().rules.overlap));
}

TEST_CASE("overlapping rule is D4 covariant") {
  auto r = check_covariance(fx().tiles, fx().rules.catalog, fx().rules.overlap);
  CHECK(r.ok);
  CHECK(r.violations.empty());
  for (const auto& g : all_symmetries()) {
    for (int t = 0; t < fx().rules.catalog.size(); ++t) CHECK(fx().rules.catalog.apply(fx().tiles, g, t) >= 0);
  }
}

TEST_CASE("adjacency tables are stable and cover every tile") {
  const auto& adj = fx().adjacency;
  CHECK(adj == adjacency_tables(fx().rules.normal, fx().seed(16, 5)));
  std::set<int> seen;
  for (auto [a, b] : adj.horizontal) seen.insert({a, b});
  CHECK(seen.size() == 56);
  // Recorded sizes of the closure.
  CHECK(adj.horizontal.size() == 124);
  CHECK(adj.vertical.size() == 124);
  CHECK(adj.quadruples.size() == 224);
}

TEST_CASE("adjacency tables match the pairs of the oracle tiling") {
  AdjacencyTables seen;
  for (const auto& p : oracle_ensemble()) harvest(to_doubled(fx().rules.catalog, p), seen);
  CHECK(seen == fx().adjacency);
}

TEST_CASE("overlapping images agree on their overlaps") {
  auto r = check_overlap_consistency(fx().rules.overlap, fx().adjacency);
  CHECK(r.ok);
  CHECK(r.violations.empty());
}

TEST_CASE("normal rule is the upper-right block and forces the border") {
  const auto& n = fx().rules.normal;
  const auto& o = fx().rules.overlap;
  REQUIRE(n.size() == 56);
  for (int t = 0; t < n.size(); ++t) {
    for (int i = 0; i <= 1; ++i) {
      for (int j = 0; j <= 1; ++j) CHECK(n.image(t, i, j) == o.image(t, i, j));
    }
  }
  CHECK(check_border_forcing(n, o, fx().adjacency).ok);
}

TEST_CASE("normal images of a 2x2 block reproduce the overlapping images") {
  for (const auto& q : fx().adjacency.quadruples) {
    DoubledPatch block({0, 0}, 2, 2, {0, 0});
    block.set(0, 0, q[0]);
    block.set(1, 0, q[1]);
    block.set(0, 1, q[2]);
    block.set(1, 1, q[3]);
    auto img = substitute_patch(fx().rules.normal, block, 1);
    for (int qy = 0; qy <= 1; ++qy) {
      for (int qx = 0; qx <= 1; ++qx) {
        int t = block.at(qx, qy);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            // substitute_patch centers the image of q at 2q - 1.
            int x = 2 * qx - 1 + dx, y = 2 * qy - 1 + dy;
            if (img.contains(x, y)) CHECK(img.at(x, y) == fx().rules.overlap.image(t, dx, dy));
          }
        }
      }
    }
  }
}

TEST_CASE("substitution matrix: columns sum to 4, primitive") {
  auto m = substitution_matrix(fx().rules.normal);
  REQUIRE(m.entries.size() == 56);
  for (std::size_t j = 0; j < 56; ++j) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < 56; ++i) s += m.entries[i][j];
    CHECK(s == 4);
  }
  CHECK(m.primitivity_power == 5);

  NormalRule stuck;
  stuck.table.assign(2, {0, 0, 0, 0});
  stuck.table[1] = {1, 1, 1, 1};
  CHECK_THROWS_AS(substitution_matrix(stuck), PrimitivityError);
  NormalRule bad;
  bad.table.assign(1, {0, 0, 0, 0});
  CHECK_NOTHROW(substitution_matrix(bad));
}

TEST_CASE("substituting an 8x8 patch twice gives a legal 32x32 patch") {
  auto seed = fx().seed(20, 2);
  REQUIRE(seed.width() >= 8);
  auto w = seed.window(seed.origin(), 8, 8);
  auto img = substitute_patch(fx().rules.normal, w, 2);
  CHECK(img.width() == 32);
  CHECK(img.height() == 32);
  CHECK(legal_doubled(fx().rules.catalog, img));
  CHECK(legal(fx().tiles, to_unit(fx().rules.catalog, img)));
  CHECK_THROWS_AS(substitute_patch(fx().rules.normal, w, -1), PreconditionError);
}

TEST_CASE("rules round-trip through JSON and carry the tile set hash") {
  auto text = serialize_rules(fx().prototiles, fx().rules);
  auto back = parse_rules(fx().prototiles, text);
  CHECK(back.catalog == fx().rules.catalog);
  CHECK(back.overlap.table == fx().rules.overlap.table);
  CHECK(back.normal.table == fx().rules.normal.table);
  CHECK(serialize_rules(fx().prototiles, back) == text);
  CHECK(tileset_hash(fx().prototiles).size() == 16);

  auto other = fx().prototiles;
  other[1].id = "renamed";
  CHECK(tileset_hash(other) != tileset_hash(fx().prototiles));
  CHECK_THROWS_AS(parse_rules(other, text), ValidationError);
  CHECK_THROWS(parse_rules(fx().prototiles, "{\"tileset_hash\": 3"));
}

TEST_CASE("unknown neighborhoods are a coverage error") {
  DoubledCatalog tiny(std::vector<Neighborhood>{fx().rules.catalog[0].content});
  auto p = oracle::patch(fx().tiles, oracle::kOffset, oracle::kOffset, 12, 12);
  CHECK_THROWS_AS(to_doubled(tiny, p), CoverageError);
}
