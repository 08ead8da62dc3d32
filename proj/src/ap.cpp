#include "robinson/ap.hpp"

#include <numeric>

#include "robinson/errors.hpp"

namespace robinson {

namespace {

constexpr const char* kModule = "ap-cohomology";

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

constexpr int corner(Corner c) { return static_cast<int>(c); }

// Start and end corner of each side under the east/north orientation.
constexpr std::array<std::pair<Corner, Corner>, 4> kSideEnds{{
    {Corner::north_west, Corner::north_east},  // north
    {Corner::south_east, Corner::north_east},  // east
    {Corner::south_west, Corner::south_east},  // south
    {Corner::south_west, Corner::north_west},  // west
}};

}  // namespace

CellComplex build_complex(int tile_count, const AdjacencyTables& adj, const CheckResult& border_forcing) {
  if (!border_forcing.ok) {
    throw PreconditionError(kModule, "build_complex", "border forcing has not been verified");
  }
  const int n = tile_count;
  UnionFind edges(4 * n), verts(4 * n);
  auto e = [](int t, Side s) { return 4 * t + index(s); };
  auto v = [](int t, Corner c) { return 4 * t + corner(c); };
  for (const auto& [a, b] : adj.horizontal) {
    edges.unite(e(a, Side::east), e(b, Side::west));
    verts.unite(v(a, Corner::north_east), v(b, Corner::north_west));
    verts.unite(v(a, Corner::south_east), v(b, Corner::south_west));
  }
  for (const auto& [a, b] : adj.vertical) {
    edges.unite(e(a, Side::north), e(b, Side::south));
    verts.unite(v(a, Corner::north_east), v(b, Corner::south_east));
    verts.unite(v(a, Corner::north_west), v(b, Corner::south_west));
  }
  for (const auto& q : adj.quadruples) verts.unite(v(q[0], Corner::north_east), v(q[3], Corner::south_west));

  // Number classes in order of first appearance.
  CellComplex c;
  c.faces = n;
  std::map<int, int> edge_id, vert_id;
  c.face_edges.resize(n);
  c.face_vertices.resize(n);
  for (int t = 0; t < n; ++t) {
    for (Side s : kSides) {
      int root = edges.find(e(t, s));
      auto [it, fresh] = edge_id.emplace(root, static_cast<int>(edge_id.size()));
      c.face_edges[t][index(s)] = it->second;
    }
    for (int k = 0; k < 4; ++k) {
      int root = verts.find(v(t, static_cast<Corner>(k)));
      auto [it, fresh] = vert_id.emplace(root, static_cast<int>(vert_id.size()));
      c.face_vertices[t][k] = it->second;
    }
  }
  c.edges = static_cast<int>(edge_id.size());
  c.vertices = static_cast<int>(vert_id.size());

  c.boundary2 = IntegerMatrix(c.edges, c.faces);
  for (int t = 0; t < n; ++t) {
    c.boundary2(c.face_edges[t][index(Side::south)], t) += 1;
    c.boundary2(c.face_edges[t][index(Side::east)], t) += 1;
    c.boundary2(c.face_edges[t][index(Side::north)], t) -= 1;
    c.boundary2(c.face_edges[t][index(Side::west)], t) -= 1;
  }
  c.boundary1 = IntegerMatrix(c.vertices, c.edges);
  std::vector<char> set(c.edges, 0);
  std::vector<std::pair<int, int>> ends(c.edges);
  for (int t = 0; t < n; ++t) {
    for (Side s : kSides) {
      int id = c.face_edges[t][index(s)];
      auto [from, to] = kSideEnds[index(s)];
      std::pair<int, int> here{c.face_vertices[t][corner(from)], c.face_vertices[t][corner(to)]};
      if (set[id] && ends[id] != here) {
        throw CheckFailedError(kModule, "build_complex", "edge class with inconsistent orientation");
      }
      set[id] = 1;
      ends[id] = here;
    }
  }
  for (int id = 0; id < c.edges; ++id) {
    c.boundary1(ends[id].second, id) += 1;
    c.boundary1(ends[id].first, id) -= 1;
  }
  if (!(c.boundary1 * c.boundary2).is_zero()) {
    throw CheckFailedError(kModule, "build_complex", "boundary of a boundary is not zero");
  }
  return c;
}

CellComplex complex_from_boundaries(IntegerMatrix boundary2, IntegerMatrix boundary1) {
  if (boundary1.cols() != boundary2.rows()) {
    throw PreconditionError(kModule, "complex_from_boundaries", "boundary sizes do not compose");
  }
  CellComplex c;
  c.faces = boundary2.cols();
  c.edges = boundary2.rows();
  c.vertices = boundary1.rows();
  c.boundary2 = std::move(boundary2);
  c.boundary1 = std::move(boundary1);
  if (!(c.boundary1 * c.boundary2).is_zero()) {
    throw CheckFailedError(kModule, "complex_from_boundaries", "boundary of a boundary is not zero");
  }
  return c;
}

namespace {

// H^k = ker(delta_out) / im(delta_in).
CohomologyPresentation present(const IntegerMatrix& delta_in, const IntegerMatrix& delta_out) {
  CohomologyPresentation p;
  auto [kernel, left] = saturated_image(integer_kernel(delta_out));
  IntegerMatrix relations = left * delta_in;
  if (!(kernel * relations == delta_in)) {
    throw CheckFailedError(kModule, "approximant_cohomology", "coboundary image outside the cocycles");
  }
  auto s = smith_normal_form(relations);
  IntegerMatrix uinv = inverse_unimodular(s.U);
  const int r = kernel.cols();
  for (int i = s.rank; i < r; ++i) p.free_rows.push_back(i);
  for (int i = 0; i < s.rank; ++i) {
    if (s.D(i, i) != 1) {
      p.torsion_rows.push_back(i);
      p.group.torsion.push_back(s.D(i, i));
    }
  }
  p.group.free_rank = static_cast<int>(p.free_rows.size());
  p.generators = IntegerMatrix(kernel.rows(), p.group.generator_count());
  int col = 0;
  for (const auto& rows : {p.free_rows, p.torsion_rows}) {
    for (int i : rows) {
      IntegerMatrix g = kernel * uinv.columns(i, 1);
      for (int k = 0; k < g.rows(); ++k) p.generators(k, col) = g(k, 0);
      ++col;
    }
  }
  p.kernel = std::move(kernel);
  p.kernel_left = std::move(left);
  p.to_generators = std::move(s.U);
  return p;
}

}  // namespace

ApproximantCohomology approximant_cohomology(const CellComplex& c) {
  IntegerMatrix delta0 = c.boundary1.transpose();  // C0 -> C1
  IntegerMatrix delta1 = c.boundary2.transpose();  // C1 -> C2
  ApproximantCohomology h;
  h.h[0] = present(IntegerMatrix(c.vertices, 0), delta0);
  h.h[1] = present(delta0, delta1);
  h.h[2] = present(delta1, IntegerMatrix(0, c.faces));
  return h;
}

namespace {

// Map on generators: column j holds the image of generator j.
IntegerMatrix map_on_cohomology(const CohomologyPresentation& p, const IntegerMatrix& a) {
  const int g = p.group.generator_count();
  IntegerMatrix out(g, g);
  for (int j = 0; j < g; ++j) {
    IntegerMatrix y = a * p.generators.columns(j, 1);
    IntegerMatrix x = p.kernel_left * y;
    if (!(p.kernel * x == y)) {
      throw IllDefinedMapError(kModule, "induced_maps", "image of a cocycle is not a cocycle");
    }
    IntegerMatrix z = p.to_generators * x;
    int row = 0;
    for (int i : p.free_rows) out(row++, j) = z(i, 0);
    for (std::size_t k = 0; k < p.torsion_rows.size(); ++k) {
      mpz_class v = z(p.torsion_rows[k], 0);
      mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), p.group.torsion[k].get_mpz_t());
      out(row++, j) = v;
    }
  }
  return out;
}

}  // namespace

InducedAction induced_maps(const NormalRule& n, const CellComplex& c, const ApproximantCohomology& h) {
  if (n.size() != c.faces || static_cast<int>(c.face_edges.size()) != c.faces) {
    throw PreconditionError(kModule, "induced_maps", "rule and complex sizes differ");
  }
  InducedAction act;
  // Normal image cells (i, j): a tile's sides and corners are carried by
  // the block cells that touch them.
  auto cell = [&](int t, int i, int j) { return n.image(t, i, j); };
  act.A2 = IntegerMatrix(c.faces, c.faces);
  for (int t = 0; t < c.faces; ++t) {
    for (int j = 0; j <= 1; ++j) {
      for (int i = 0; i <= 1; ++i) act.A2(t, cell(t, i, j)) += 1;
    }
  }

  struct Part {
    int i, j;
  };
  const std::array<std::array<Part, 2>, 4> side_parts{{
      {{{0, 1}, {1, 1}}},  // north: upper-left, upper-right
      {{{1, 0}, {1, 1}}},  // east
      {{{0, 0}, {1, 0}}},  // south
      {{{0, 0}, {0, 1}}},  // west
  }};
  const std::array<Part, 4> corner_part{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

  act.A1 = IntegerMatrix(c.edges, c.edges);
  std::vector<char> done(c.edges, 0);
  for (int t = 0; t < c.faces; ++t) {
    for (Side s : kSides) {
      IntegerMatrix row(1, c.edges);
      for (const auto& part : side_parts[index(s)]) row(0, c.face_edges[cell(t, part.i, part.j)][index(s)]) += 1;
      int e = c.face_edges[t][index(s)];
      if (done[e]) {
        if (!(row == act.A1.rows_range(e, 1))) {
          throw IllDefinedMapError(kModule, "induced_maps", "edge class " + std::to_string(e) + " has two images");
        }
        continue;
      }
      done[e] = 1;
      for (int k = 0; k < c.edges; ++k) act.A1(e, k) = row(0, k);
    }
  }

  act.A0 = IntegerMatrix(c.vertices, c.vertices);
  std::vector<int> image(c.vertices, -1);
  for (int t = 0; t < c.faces; ++t) {
    for (int k = 0; k < 4; ++k) {
      const auto& part = corner_part[k];
      int w = c.face_vertices[cell(t, part.i, part.j)][k];
      int v = c.face_vertices[t][k];
      if (image[v] >= 0 && image[v] != w) {
        throw IllDefinedMapError(kModule, "induced_maps", "vertex class " + std::to_string(v) + " has two images");
      }
      image[v] = w;
    }
  }
  for (int v = 0; v < c.vertices; ++v) act.A0(v, image[v]) = 1;

  IntegerMatrix delta0 = c.boundary1.transpose(), delta1 = c.boundary2.transpose();
  if (!(act.A1 * delta0 == delta0 * act.A0) || !(act.A2 * delta1 == delta1 * act.A1)) {
    throw CheckFailedError(kModule, "induced_maps", "cochain maps do not commute with the coboundary");
  }
  act.a[0] = map_on_cohomology(h.h[0], act.A0);
  act.a[1] = map_on_cohomology(h.h[1], act.A1);
  act.a[2] = map_on_cohomology(h.h[2], act.A2);
  return act;
}

CohomologyResult hull_cohomology(const ApproximantCohomology& h, const InducedAction& act) {
  CohomologyResult r;
  for (int k = 0; k < 3; ++k) {
    r.approximant[k] = h.h[k].group;
    r.hull[k] = direct_limit(h.h[k].group, act.a[k]);
    r.spectra[k] = r.hull[k].eigenvalues;
  }
  return r;
}

}  // namespace robinson
