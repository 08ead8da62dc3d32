#include "robinson/tiles.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "robinson/errors.hpp"

namespace robinson {

namespace {

constexpr int kHalf = 2;  // half an edge, in quarter units

std::pair<int, int> mark_point(Side s, int offset) {
  switch (s) {
    case Side::north: return {offset, kHalf};
    case Side::east: return {kHalf, offset};
    case Side::south: return {offset, -kHalf};
    case Side::west: return {-kHalf, offset};
  }
  return {0, 0};
}

std::pair<Side, int> point_mark(std::pair<int, int> p) {
  auto [x, y] = p;
  if (y == kHalf) return {Side::north, x};
  if (y == -kHalf) return {Side::south, x};
  if (x == kHalf) return {Side::east, y};
  return {Side::west, y};
}

Side side_from_letter(const std::string& s) {
  if (s == "N") return Side::north;
  if (s == "E") return Side::east;
  if (s == "S") return Side::south;
  if (s == "W") return Side::west;
  throw ParseError("core-tiles", "load_tileset", "unknown side '" + s + "'");
}

LineColor color_from_string(const std::string& s) {
  if (s == "principal") return LineColor::principal;
  if (s == "secondary") return LineColor::secondary;
  throw ValidationError("core-tiles", "load_tileset", "unknown color '" + s + "'");
}

Arrow arrow_from_string(const std::string& s) {
  if (s == "out") return Arrow::out;
  if (s == "in") return Arrow::in;
  if (s == "none") return Arrow::none;
  throw ValidationError("core-tiles", "load_tileset", "unknown arrow '" + s + "'");
}

}  // namespace

char side_letter(Side s) noexcept { return "NESW"[index(s)]; }

std::string_view to_string(LineColor c) noexcept {
  return c == LineColor::principal ? "principal" : "secondary";
}

std::string_view to_string(Arrow a) noexcept {
  switch (a) {
    case Arrow::out: return "out";
    case Arrow::in: return "in";
    case Arrow::none: return "none";
  }
  return "none";
}

EdgeSignature::EdgeSignature(std::vector<LineMark> marks) : marks_(std::move(marks)) {
  std::sort(marks_.begin(), marks_.end());
  for (std::size_t i = 0; i < marks_.size(); ++i) {
    const auto& m = marks_[i];
    if (m.offset < -1 || m.offset > 1) {
      throw ValidationError("core-tiles", "edge_signature",
                            "offset " + std::to_string(m.offset) + " outside {-1,0,1}");
    }
    if ((m.color == LineColor::principal) == (m.arrow == Arrow::none)) {
      throw ValidationError("core-tiles", "edge_signature",
                            "principal lines need an arrow, secondary lines must not carry one");
    }
    if (i > 0 && marks_[i - 1].offset == m.offset && marks_[i - 1].color == m.color) {
      throw ValidationError("core-tiles", "edge_signature",
                            "duplicate mark at offset " + std::to_string(m.offset));
    }
  }
}

bool edges_match(const EdgeSignature& a, const EdgeSignature& b) {
  const auto& ma = a.marks();
  const auto& mb = b.marks();
  if (ma.size() != mb.size()) return false;
  for (std::size_t i = 0; i < ma.size(); ++i) {
    if (ma[i].offset != mb[i].offset || ma[i].color != mb[i].color) return false;
    if (ma[i].arrow == Arrow::none || mb[i].arrow == Arrow::none) {
      if (ma[i].arrow != mb[i].arrow) return false;
    } else if (ma[i].arrow == mb[i].arrow) {
      return false;
    }
  }
  return true;
}

std::pair<int, int> D4Element::apply(int x, int y) const noexcept {
  if (reflected) x = -x;
  for (int r = 0; r < ((rotation % 4) + 4) % 4; ++r) {
    int nx = -y;
    y = x;
    x = nx;
  }
  return {x, y};
}

D4Element operator*(const D4Element& g, const D4Element& h) noexcept {
  for (const auto& k : all_symmetries()) {
    auto [ax, ay] = h.apply(1, 0);
    auto [bx, by] = h.apply(0, 1);
    if (k.apply(1, 0) == g.apply(ax, ay) && k.apply(0, 1) == g.apply(bx, by)) return k;
  }
  return {};
}

D4Element D4Element::inverse() const noexcept {
  for (const auto& k : all_symmetries()) {
    if (k * *this == D4Element{}) return k;
  }
  return {};
}

const std::array<D4Element, 8>& all_symmetries() noexcept {
  static const std::array<D4Element, 8> elements = [] {
    std::array<D4Element, 8> out{};
    for (int r = 0; r < 4; ++r) {
      out[2 * r] = {r, false};
      out[2 * r + 1] = {r, true};
    }
    return out;
  }();
  return elements;
}

std::string to_string(const D4Element& g) {
  return "r" + std::to_string(g.rotation) + (g.reflected ? "f" : "");
}

EdgeSet transform_edges(const EdgeSet& edges, const D4Element& g) {
  std::array<std::vector<LineMark>, 4> marks;
  for (Side s : kSides) {
    for (const auto& m : edges[index(s)].marks()) {
      auto [px, py] = mark_point(s, m.offset);
      auto [side, offset] = point_mark(g.apply(px, py));
      marks[index(side)].push_back({offset, m.color, m.arrow});
    }
  }
  EdgeSet out;
  for (int i = 0; i < 4; ++i) out[i] = EdgeSignature(std::move(marks[i]));
  return out;
}

std::vector<D4Element> stabilizer(const Prototile& p) {
  std::vector<D4Element> out;
  for (const auto& g : all_symmetries()) {
    if (transform_edges(p.edges, g) == p.edges) out.push_back(g);
  }
  return out;
}

OrientedTile canonical(const std::vector<Prototile>& tiles, int prototile, const D4Element& g) {
  D4Element best = g;
  for (const auto& h : stabilizer(tiles.at(prototile))) best = std::min(best, g * h);
  return {prototile, best};
}

OrientedTile apply_symmetry(const std::vector<Prototile>& tiles, const D4Element& g,
                            const OrientedTile& t) {
  return canonical(tiles, t.prototile, g * t.symmetry);
}

EdgeSet oriented_edges(const std::vector<Prototile>& tiles, const OrientedTile& t) {
  return transform_edges(tiles.at(t.prototile).edges, t.symmetry);
}

std::vector<OrientedTile> oriented_orbit(const std::vector<Prototile>& tiles) {
  std::vector<int> order(tiles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return tiles[a].id < tiles[b].id; });
  std::vector<OrientedTile> out;
  for (int p : order) {
    std::set<D4Element> seen;
    for (const auto& g : all_symmetries()) seen.insert(canonical(tiles, p, g).symmetry);
    for (const auto& g : seen) out.push_back({p, g});
  }
  return out;
}

std::vector<Prototile> parse_tileset(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("core-tiles", "load_tileset", e.what());
  }
  std::vector<Prototile> out;
  try {
    for (const auto& jt : doc.at("prototiles")) {
      Prototile p;
      p.id = jt.at("id").get<std::string>();
      p.is_cross = jt.value("is_cross", false);
      std::array<bool, 4> seen{};
      for (const auto& [key, jmarks] : jt.at("edges").items()) {
        Side s = side_from_letter(key);
        std::vector<LineMark> marks;
        for (const auto& jm : jmarks) {
          marks.push_back({jm.at("offset").get<int>(),
                           color_from_string(jm.at("color").get<std::string>()),
                           arrow_from_string(jm.at("arrow").get<std::string>())});
        }
        p.edges[index(s)] = EdgeSignature(std::move(marks));
        seen[index(s)] = true;
      }
      if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
        throw ValidationError("core-tiles", "load_tileset", "tile '" + p.id + "' lacks an edge");
      }
      out.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("core-tiles", "load_tileset", e.what());
  }
  if (out.empty()) throw ValidationError("core-tiles", "load_tileset", "empty tile list");
  std::set<std::string> ids;
  for (const auto& p : out) {
    if (!ids.insert(p.id).second) {
      throw ValidationError("core-tiles", "load_tileset", "duplicate prototile id '" + p.id + "'");
    }
  }
  return out;
}

std::vector<Prototile> load_tileset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("core-tiles", "load_tileset", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tileset(buf.str());
}

std::string serialize_tileset(const std::vector<Prototile>& tiles) {
  nlohmann::ordered_json doc;
  doc["prototiles"] = nlohmann::ordered_json::array();
  for (const auto& p : tiles) {
    nlohmann::ordered_json jt;
    jt["id"] = p.id;
    jt["is_cross"] = p.is_cross;
    nlohmann::ordered_json je;
    for (Side s : kSides) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& m : p.edges[index(s)].marks()) {
        arr.push_back({{"offset", m.offset},
                       {"color", std::string(to_string(m.color))},
                       {"arrow", std::string(to_string(m.arrow))}});
      }
      je[std::string(1, side_letter(s))] = arr;
    }
    jt["edges"] = je;
    doc["prototiles"].push_back(jt);
  }
  return doc.dump(2) + "\n";
}

TileSet::TileSet(std::vector<Prototile> prototiles) : prototiles_(std::move(prototiles)) {
  if (prototiles_.empty()) throw ValidationError("core-tiles", "tileset", "empty tile list");
  auto crosses = std::count_if(prototiles_.begin(), prototiles_.end(),
                               [](const Prototile& p) { return p.is_cross; });
  if (crosses != 1) {
    throw ValidationError("core-tiles", "tileset", "expected exactly one cross prototile");
  }
  oriented_ = oriented_orbit(prototiles_);
  for (const auto& t : oriented_) edges_.push_back(oriented_edges(prototiles_, t));
  const int n = size();
  action_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (const auto& g : all_symmetries()) {
      action_[i][g_index(g)] = index_of(apply_symmetry(prototiles_, g, oriented_[i]));
    }
  }
  horizontal_.assign(static_cast<std::size_t>(n) * n, false);
  vertical_.assign(static_cast<std::size_t>(n) * n, false);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      horizontal_[a * n + b] = edges_match(edge(a, Side::east), edge(b, Side::west));
      vertical_[a * n + b] = edges_match(edge(a, Side::north), edge(b, Side::south));
    }
  }
}

int TileSet::index_of(const OrientedTile& t) const {
  auto it = std::find(oriented_.begin(), oriented_.end(), t);
  return it == oriented_.end() ? -1 : static_cast<int>(it - oriented_.begin());
}

int TileSet::find(const EdgeSet& edges) const {
  auto it = std::find(edges_.begin(), edges_.end(), edges);
  return it == edges_.end() ? -1 : static_cast<int>(it - edges_.begin());
}

std::string TileSet::label(int tile) const {
  const auto& t = oriented_.at(tile);
  return prototiles_[t.prototile].id + "@" + to_string(t.symmetry);
}

std::vector<int> TileSet::orbit_sizes() const {
  std::vector<int> sizes(prototiles_.size(), 0);
  for (const auto& t : oriented_) ++sizes[t.prototile];
  return sizes;
}

std::vector<DecorationStep> decoration_steps(const EdgeSet& edges) {
  std::vector<DecorationStep> out;
  auto add_line = [&](LineColor color, std::pair<int, int> a, std::pair<int, int> b) {
    int n = std::max(std::abs(b.first - a.first), std::abs(b.second - a.second));
    if (n == 0) return;
    int dx = (b.first - a.first) / n, dy = (b.second - a.second) / n;
    for (int i = 0; i < n; ++i) {
      std::pair<int, int> p{a.first + i * dx, a.second + i * dy};
      std::pair<int, int> q{p.first + dx, p.second + dy};
      if (color == LineColor::secondary && q < p) std::swap(p, q);
      out.push_back({color, p, q});
    }
  };
  std::vector<std::pair<Side, int>> secondary;
  for (Side s : kSides) {
    for (const auto& m : edges[index(s)].marks()) {
      if (m.color == LineColor::secondary) {
        secondary.emplace_back(s, m.offset);
        continue;
      }
      // Principal lines run from the edge to the tile center.
      auto p = mark_point(s, m.offset);
      std::pair<int, int> center{m.offset * (s == Side::north || s == Side::south ? 1 : 0),
                                 m.offset * (s == Side::east || s == Side::west ? 1 : 0)};
      if (m.arrow == Arrow::out) {
        add_line(LineColor::principal, center, p);
      } else {
        add_line(LineColor::principal, p, center);
      }
    }
  }
  // Secondary lines either cross the tile straight or turn a corner between
  // two adjacent edges.
  std::set<std::pair<Side, int>> pending(secondary.begin(), secondary.end());
  while (!pending.empty()) {
    auto [s, o] = *pending.begin();
    pending.erase(pending.begin());
    auto straight = pending.find({opposite(s), o});
    if (straight != pending.end()) {
      add_line(LineColor::secondary, mark_point(s, o), mark_point(opposite(s), o));
      pending.erase(straight);
      continue;
    }
    auto corner = std::find_if(pending.begin(), pending.end(), [&](const auto& other) {
      return other.first != s && other.first != opposite(s);
    });
    if (corner == pending.end()) {
      // A dangling secondary mark: draw it to the tile center line.
      auto p = mark_point(s, o);
      add_line(LineColor::secondary, p, {p.first / 2, p.second / 2});
      continue;
    }
    auto p = mark_point(s, o);
    auto q = mark_point(corner->first, corner->second);
    bool vertical_edge = s == Side::east || s == Side::west;
    std::pair<int, int> bend{vertical_edge ? q.first : p.first, vertical_edge ? p.second : q.second};
    add_line(LineColor::secondary, bend, p);
    add_line(LineColor::secondary, bend, q);
    pending.erase(corner);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace robinson
