#include "robinson/substitution.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "robinson/errors.hpp"

namespace robinson {

namespace {

constexpr const char* kModule = "doubling-substitution";

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int ceil_div(int a, int b) { return -floor_div(-a, b); }

int mod(int a, int m) { return ((a % m) + m) % m; }

}  // namespace

DoubledCatalog::DoubledCatalog(std::vector<Neighborhood> contents) {
  std::sort(contents.begin(), contents.end(), [](const Neighborhood& a, const Neighborhood& b) {
    int ca = a[nbr_index(0, 0)], cb = b[nbr_index(0, 0)];
    return ca != cb ? ca < cb : a < b;
  });
  contents.erase(std::unique(contents.begin(), contents.end()), contents.end());
  for (const auto& c : contents) {
    int id = static_cast<int>(tiles_.size());
    tiles_.push_back({id, c, c[nbr_index(0, 0)]});
    index_.emplace(c, id);
  }
}

int DoubledCatalog::find(const Neighborhood& n) const {
  auto it = index_.find(n);
  return it == index_.end() ? -1 : it->second;
}

int DoubledCatalog::apply(const TileSet& tiles, const D4Element& g, int id) const {
  const auto& src = tiles_.at(id);
  Neighborhood out{};
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      auto [gx, gy] = g.apply(dx, dy);
      out[nbr_index(gx, gy)] = tiles.apply(g, src.at(dx, dy));
    }
  }
  return find(out);
}

std::optional<Neighborhood> neighborhood(const Patch& p, int x, int y, int step) {
  Neighborhood n{};
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      int t = p.get(x + step * dx, y + step * dy);
      if (t < 0) return std::nullopt;
      n[nbr_index(dx, dy)] = t;
    }
  }
  return n;
}

LatticePoint doubled_center_parity(const Patch& p) {
  auto a = p.parity_anchor();
  return {(a.x + 1) % 2, (a.y + 1) % 2};
}

DoubledCatalog derive_doubled_tiles(const TileSet& tiles, const std::vector<Patch>& ensemble) {
  std::set<Neighborhood> seen;
  for (const auto& p : ensemble) {
    if (!legal(tiles, p)) throw PreconditionError(kModule, "derive_doubled_tiles", "ensemble patch is not legal");
    auto e = doubled_center_parity(p);
    auto o = p.origin();
    for (int y = o.y + 1; y + 1 < o.y + p.height(); ++y) {
      if (mod(y, 2) != e.y) continue;
      for (int x = o.x + 1; x + 1 < o.x + p.width(); ++x) {
        if (mod(x, 2) != e.x) continue;
        seen.insert(*neighborhood(p, x, y));
      }
    }
  }
  return DoubledCatalog({seen.begin(), seen.end()});
}

DoubledPatch to_doubled(const DoubledCatalog& cat, const Patch& p) {
  auto e = doubled_center_parity(p);
  auto o = p.origin();
  int qx0 = ceil_div(o.x + 1 - e.x, 2), qx1 = floor_div(o.x + p.width() - 2 - e.x, 2);
  int qy0 = ceil_div(o.y + 1 - e.y, 2), qy1 = floor_div(o.y + p.height() - 2 - e.y, 2);
  if (qx1 < qx0 || qy1 < qy0) return DoubledPatch({qx0, qy0}, 0, 0, e);
  // The stored parity of a doubled patch is the unit offset of its centers.
  DoubledPatch d({qx0, qy0}, qx1 - qx0 + 1, qy1 - qy0 + 1, e);
  for (int qy = qy0; qy <= qy1; ++qy) {
    for (int qx = qx0; qx <= qx1; ++qx) {
      auto n = neighborhood(p, 2 * qx + e.x, 2 * qy + e.y);
      int id = n ? cat.find(*n) : -1;
      if (id < 0) throw CoverageError(kModule, "to_doubled", "neighborhood not in the catalog");
      d.set(qx, qy, id);
    }
  }
  return d;
}

Patch to_unit(const DoubledCatalog& cat, const DoubledPatch& d) {
  auto e = d.parity_anchor();
  auto o = d.origin();
  LatticePoint uo{2 * o.x + e.x - 1, 2 * o.y + e.y - 1};
  Patch p(uo, 2 * d.width() + 1, 2 * d.height() + 1, {(e.x + 1) % 2, (e.y + 1) % 2});
  for (int qy = o.y; qy < o.y + d.height(); ++qy) {
    for (int qx = o.x; qx < o.x + d.width(); ++qx) {
      const auto& t = cat[d.at(qx, qy)];
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          int x = 2 * qx + e.x + dx, y = 2 * qy + e.y + dy;
          int have = p.at(x, y);
          if (have >= 0 && have != t.at(dx, dy)) {
            throw ValidationError(kModule, "to_unit", "doubled tiles disagree on a shared collar");
          }
          p.set(x, y, t.at(dx, dy));
        }
      }
    }
  }
  return p;
}

bool legal_doubled(const DoubledCatalog& cat, const DoubledPatch& d) {
  auto o = d.origin();
  for (int qy = o.y; qy < o.y + d.height(); ++qy) {
    for (int qx = o.x; qx < o.x + d.width(); ++qx) {
      int t = d.at(qx, qy);
      if (t < 0 || t >= cat.size()) return false;
      int r = d.get(qx + 1, qy), a = d.get(qx, qy + 1);
      for (int k = -1; k <= 1; ++k) {
        if (r >= 0 && cat[t].at(1, k) != cat[r].at(-1, k)) return false;
        if (a >= 0 && cat[t].at(k, 1) != cat[a].at(k, -1)) return false;
      }
    }
  }
  return true;
}

OverlapRule derive_overlapping_rule(const TileSet& tiles, const DoubledCatalog& cat,
                                    const std::vector<Patch>& ensemble) {
  std::vector<std::optional<std::array<int, 9>>> rule(cat.size());
  for (const auto& p : ensemble) {
    auto o = p.origin();
    auto level1 = deflate(tiles, p);
    if (!level1) continue;
    auto b = level1->shift;
    for (int cy = o.y + 3; cy + 3 < o.y + p.height(); ++cy) {
      if (mod(cy - b.y, 4) != 0) continue;
      for (int cx = o.x + 3; cx + 3 < o.x + p.width(); ++cx) {
        if (mod(cx - b.x, 4) != 0) continue;
        int t = cat.find(*neighborhood(p, cx, cy, 2));
        if (t < 0) continue;
        std::array<int, 9> img{};
        bool complete = true;
        for (int dy = -1; dy <= 1 && complete; ++dy) {
          for (int dx = -1; dx <= 1 && complete; ++dx) {
            int s = cat.find(*neighborhood(p, cx + 2 * dx, cy + 2 * dy));
            complete = s >= 0;
            img[nbr_index(dx, dy)] = s;
          }
        }
        if (!complete) continue;
        if (rule[t] && *rule[t] != img) {
          throw AmbiguityError(kModule, "derive_overlapping_rule",
                               "doubled tile " + std::to_string(t) + " has two distinct images");
        }
        rule[t] = img;
      }
    }
  }
  OverlapRule r;
  for (int t = 0; t < cat.size(); ++t) {
    if (!rule[t]) {
      throw CoverageError(kModule, "derive_overlapping_rule",
                          "doubled tile " + std::to_string(t) + " never occurs at level 1");
    }
    r.table.push_back(*rule[t]);
  }
  return r;
}

void harvest(const DoubledPatch& d, AdjacencyTables& into) {
  auto o = d.origin();
  for (int qy = o.y; qy < o.y + d.height(); ++qy) {
    for (int qx = o.x; qx < o.x + d.width(); ++qx) {
      int t = d.at(qx, qy);
      int r = d.get(qx + 1, qy), a = d.get(qx, qy + 1), ra = d.get(qx + 1, qy + 1);
      if (t < 0) continue;
      if (r >= 0) into.horizontal.insert({t, r});
      if (a >= 0) into.vertical.insert({t, a});
      if (r >= 0 && a >= 0 && ra >= 0) into.quadruples.insert({t, r, a, ra});
    }
  }
}

AdjacencyTables adjacency_tables(const NormalRule& n, const DoubledPatch& seed) {
  AdjacencyTables tables;
  harvest(seed, tables);
  const long max_rounds = static_cast<long>(n.size()) * n.size();
  int stable = 0;
  for (long round = 0; round < max_rounds; ++round) {
    AdjacencyTables next = tables;
    for (const auto& [a, b] : tables.horizontal) {
      DoubledPatch d({0, 0}, 2, 1);
      d.set(0, 0, a);
      d.set(1, 0, b);
      harvest(substitute_patch(n, d, 1), next);
    }
    for (const auto& [a, b] : tables.vertical) {
      DoubledPatch d({0, 0}, 1, 2);
      d.set(0, 0, a);
      d.set(0, 1, b);
      harvest(substitute_patch(n, d, 1), next);
    }
    for (const auto& q : tables.quadruples) {
      DoubledPatch d({0, 0}, 2, 2);
      d.set(0, 0, q[0]);
      d.set(1, 0, q[1]);
      d.set(0, 1, q[2]);
      d.set(1, 1, q[3]);
      harvest(substitute_patch(n, d, 1), next);
    }
    stable = next == tables ? stable + 1 : 0;
    tables = std::move(next);
    if (stable == 2) return tables;
  }
  throw NonConvergenceError(kModule, "adjacency_tables", "pair and block sets still growing");
}

CheckResult check_overlap_consistency(const OverlapRule& r, const AdjacencyTables& adj) {
  CheckResult res;
  for (const auto& [a, b] : adj.horizontal) {
    for (int k = -1; k <= 1; ++k) {
      if (r.image(a, 1, k) != r.image(b, -1, k)) {
        res.violations.push_back({"horizontal", {a, b}, "row " + std::to_string(k)});
        break;
      }
    }
  }
  for (const auto& [a, b] : adj.vertical) {
    for (int k = -1; k <= 1; ++k) {
      if (r.image(a, k, 1) != r.image(b, k, -1)) {
        res.violations.push_back({"vertical", {a, b}, "column " + std::to_string(k)});
        break;
      }
    }
  }
  res.ok = res.violations.empty();
  res.warning = adj.empty();
  return res;
}

CheckResult check_covariance(const TileSet& tiles, const DoubledCatalog& cat, const OverlapRule& r) {
  CheckResult res;
  for (const auto& g : all_symmetries()) {
    for (int t = 0; t < cat.size(); ++t) {
      int gt = cat.apply(tiles, g, t);
      if (gt < 0) {
        res.violations.push_back({"covariance", {t}, "transformed tile " + to_string(g) + " not in catalog"});
        continue;
      }
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          auto [gx, gy] = g.apply(dx, dy);
          if (r.image(gt, gx, gy) != cat.apply(tiles, g, r.image(t, dx, dy))) {
            res.violations.push_back({"covariance", {t}, to_string(g)});
            dy = dx = 2;
          }
        }
      }
    }
  }
  res.ok = res.violations.empty();
  return res;
}

bool image_centers_anchored(const TileSet& tiles, const DoubledCatalog& cat, const OverlapRule& r) {
  for (int t = 0; t < r.size(); ++t) {
    const auto& c = cat[r.image(t, 0, 0)];
    for (int dy : {-1, 1}) {
      for (int dx : {-1, 1}) {
        if (!tiles.is_cross(c.at(dx, dy))) return false;
      }
    }
    if (tiles.is_cross(c.at(1, 0)) || tiles.is_cross(c.at(0, 1))) return false;
  }
  return true;
}

NormalRule to_normal_rule(const OverlapRule& r) {
  NormalRule n;
  for (int t = 0; t < r.size(); ++t) {
    n.table.push_back({r.image(t, 0, 0), r.image(t, 1, 0), r.image(t, 0, 1), r.image(t, 1, 1)});
  }
  return n;
}

CheckResult check_border_forcing(const NormalRule& n, const OverlapRule& r, const AdjacencyTables& adj) {
  CheckResult res;
  std::vector<char> has_context(n.size(), 0);
  // Normal block of t covers (0..1, 0..1) around 2q; the west neighbor's
  // block puts its right column at x = -1, the south neighbor's top row at
  // y = -1, the south-west neighbor's upper-right tile at (-1, -1).
  for (const auto& [w, t] : adj.horizontal) {
    has_context[t] = 1;
    for (int j = 0; j <= 1; ++j) {
      if (n.image(w, 1, j) != r.image(t, -1, j)) {
        res.violations.push_back({"corona-west", {w, t}, "row " + std::to_string(j)});
        break;
      }
    }
  }
  for (const auto& [s, t] : adj.vertical) {
    has_context[t] = 1;
    for (int i = 0; i <= 1; ++i) {
      if (n.image(s, i, 1) != r.image(t, i, -1)) {
        res.violations.push_back({"corona-south", {s, t}, "column " + std::to_string(i)});
        break;
      }
    }
  }
  for (const auto& q : adj.quadruples) {
    if (n.image(q[0], 1, 1) != r.image(q[3], -1, -1)) {
      res.violations.push_back({"corona-south-west", {q[0], q[1], q[2], q[3]}, "corner"});
    }
  }
  res.ok = res.violations.empty();
  res.warning = std::any_of(has_context.begin(), has_context.end(), [](char c) { return !c; });
  return res;
}

SubstitutionMatrix substitution_matrix(const NormalRule& n) {
  const int size = n.size();
  SubstitutionMatrix m;
  m.entries.assign(size, std::vector<std::int64_t>(size, 0));
  for (int j = 0; j < size; ++j) {
    for (int i : n.table[j]) ++m.entries.at(i)[j];
  }
  for (int j = 0; j < size; ++j) {
    std::int64_t sum = 0;
    for (int i = 0; i < size; ++i) sum += m.entries[i][j];
    if (sum != 4) throw ValidationError(kModule, "substitution_matrix", "column sum is not 4");
  }
  using Bool = std::vector<std::vector<char>>;
  Bool base(size, std::vector<char>(size, 0));
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) base[i][j] = m.entries[i][j] > 0;
  }
  Bool power = base;
  for (int k = 1; k <= size; ++k) {
    bool positive = true;
    for (const auto& row : power) {
      positive = positive && std::all_of(row.begin(), row.end(), [](char c) { return c != 0; });
    }
    if (positive) {
      m.primitivity_power = k;
      return m;
    }
    Bool next(size, std::vector<char>(size, 0));
    for (int i = 0; i < size; ++i) {
      for (int l = 0; l < size; ++l) {
        if (!power[i][l]) continue;
        for (int j = 0; j < size; ++j) next[i][j] |= base[l][j];
      }
    }
    power = std::move(next);
  }
  throw PrimitivityError(kModule, "substitution_matrix", "no positive power up to the matrix size");
}

DoubledPatch substitute_patch(const NormalRule& n, const DoubledPatch& p, int m) {
  if (m < 0) throw PreconditionError(kModule, "substitute_patch", "m must be non-negative");
  DoubledPatch cur = p;
  for (int step = 0; step < m; ++step) {
    auto o = cur.origin();
    DoubledPatch next({2 * o.x - 1, 2 * o.y - 1}, 2 * cur.width(), 2 * cur.height(), cur.parity_anchor());
    for (int qy = o.y; qy < o.y + cur.height(); ++qy) {
      for (int qx = o.x; qx < o.x + cur.width(); ++qx) {
        int t = cur.at(qx, qy);
        for (int j = 0; j <= 1; ++j) {
          for (int i = 0; i <= 1; ++i) next.set(2 * qx - 1 + i, 2 * qy - 1 + j, n.image(t, i, j));
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Derivation derive_rules(const TileSet& tiles, const EnsembleOptions& opts) {
  std::optional<Derivation> previous;
  std::vector<Patch> ensemble;
  GenerateOptions g;
  g.width = g.height = opts.patch_size;
  g.margin = opts.margin;
  g.seed = opts.seed;
  int count = opts.initial_patches;
  for (int growth = 0; growth <= opts.max_growths; ++growth, count *= 2) {
    // Patches crossed by a defect line belong to non-repetitive tilings and
    // are skipped.
    while (static_cast<int>(ensemble.size()) < count) {
      if (g.seed - opts.seed > 64ULL * static_cast<std::uint64_t>(count)) {
        throw InstabilityError(kModule, "derive_rules", "too few generated patches free of defect lines");
      }
      Patch p = generate_patch(tiles, g);
      ++g.seed;
      if (hierarchical(tiles, p)) ensemble.push_back(std::move(p));
    }
    Derivation d;
    d.catalog = derive_doubled_tiles(tiles, ensemble);
    d.ensemble_patches = count;
    try {
      d.overlap = derive_overlapping_rule(tiles, d.catalog, ensemble);
    } catch (const CoverageError&) {
      previous.reset();
      continue;
    }
    d.normal = to_normal_rule(d.overlap);
    if (previous && previous->catalog == d.catalog && previous->overlap.table == d.overlap.table) {
      return d;
    }
    previous = std::move(d);
  }
  throw InstabilityError(kModule, "derive_rules", "ensemble growths keep disagreeing");
}

std::string fnv1a64(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string tileset_hash(const std::vector<Prototile>& prototiles) { return fnv1a64(serialize_tileset(prototiles)); }

std::string serialize_rules(const std::vector<Prototile>& prototiles, const Derivation& d) {
  TileSet tiles(prototiles);
  nlohmann::ordered_json j;
  j["tileset_hash"] = tileset_hash(prototiles);
  j["ensemble_patches"] = d.ensemble_patches;
  auto& dt = j["doubled_tiles"] = nlohmann::ordered_json::array();
  for (const auto& t : d.catalog.tiles()) {
    nlohmann::ordered_json e;
    e["id"] = t.id;
    e["base"] = tiles.label(t.base);
    std::vector<std::string> content;
    for (int c : t.content) content.push_back(tiles.label(c));
    e["content"] = content;
    dt.push_back(e);
  }
  j["overlap_table"] = d.overlap.table;
  j["normal_table"] = d.normal.table;
  return j.dump(1) + "\n";
}

Derivation parse_rules(const std::vector<Prototile>& prototiles, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(kModule, "parse_rules", ex.what());
  }
  TileSet tiles(prototiles);
  try {
    if (j.at("tileset_hash").get<std::string>() != tileset_hash(prototiles)) {
      throw ValidationError(kModule, "parse_rules", "rule cache belongs to a different tile set");
    }
    std::map<std::string, int> by_label;
    for (int t = 0; t < tiles.size(); ++t) by_label[tiles.label(t)] = t;
    std::vector<Neighborhood> contents;
    for (const auto& e : j.at("doubled_tiles")) {
      Neighborhood n{};
      const auto& labels = e.at("content");
      if (labels.size() != 9) throw ValidationError(kModule, "parse_rules", "doubled tile content must have 9 cells");
      for (int k = 0; k < 9; ++k) {
        auto it = by_label.find(labels[k].get<std::string>());
        if (it == by_label.end()) throw ValidationError(kModule, "parse_rules", "unknown tile label");
        n[k] = it->second;
      }
      contents.push_back(n);
    }
    Derivation d;
    d.catalog = DoubledCatalog(contents);
    for (std::size_t k = 0; k < contents.size(); ++k) {
      if (d.catalog.size() != static_cast<int>(contents.size()) || d.catalog[k].content != contents[k] ||
          j["doubled_tiles"][k].at("id").get<int>() != static_cast<int>(k)) {
        throw ValidationError(kModule, "parse_rules", "doubled tiles not in canonical order");
      }
    }
    d.overlap.table = j.at("overlap_table").get<std::vector<std::array<int, 9>>>();
    d.normal.table = j.at("normal_table").get<std::vector<std::array<int, 4>>>();
    d.ensemble_patches = j.value("ensemble_patches", 0);
    const int size = d.catalog.size();
    auto in_range = [&](const auto& rows) {
      return static_cast<int>(rows.size()) == size &&
             std::all_of(rows.begin(), rows.end(), [&](const auto& row) {
               return std::all_of(row.begin(), row.end(), [&](int v) { return v >= 0 && v < size; });
             });
    };
    if (!in_range(d.overlap.table) || !in_range(d.normal.table)) {
      throw ValidationError(kModule, "parse_rules", "rule table size or entries out of range");
    }
    return d;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(kModule, "parse_rules", ex.what());
  }
}

}  // namespace robinson
