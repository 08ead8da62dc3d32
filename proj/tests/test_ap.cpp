#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixture.hpp"
#include "robinson/errors.hpp"

using namespace robinson;

namespace {

const testing::Fixture& fx() { return testing::fixture(); }

// Rank over F_p by plain Gaussian elimination.
int rank_mod(const IntegerMatrix& m, long p) {
  std::vector<std::vector<long>> a(m.rows(), std::vector<long>(m.cols()));
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      mpz_class r = m(i, j) % p;
      if (r < 0) r += p;
      a[i][j] = r.get_si();
    }
  }
  int rank = 0;
  for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
    int piv = -1;
    for (int i = rank; i < m.rows() && piv < 0; ++i) {
      if (a[i][col]) piv = i;
    }
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    long inv = 1;
    while (a[rank][col] * inv % p != 1) ++inv;
    for (auto& x : a[rank]) x = x * inv % p;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == rank || !a[i][col]) continue;
      long f = a[i][col];
      for (int j = 0; j < m.cols(); ++j) a[i][j] = ((a[i][j] - f * a[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

// dim H^k(X; F_p) from the cellular boundaries.
std::array<int, 3> betti_mod(const CellComplex& c, long p) {
  int r1 = rank_mod(c.boundary1, p), r2 = rank_mod(c.boundary2, p);
  return {c.vertices - r1, c.edges - r1 - r2, c.faces - r2};
}

int torsion_count(const AbelianGroupDescriptor& g, long p) {
  int n = 0;
  for (const auto& t : g.torsion) n += t % p == 0;
  return n;
}

std::vector<std::string> names(const std::array<AbelianGroupDescriptor, 3>& g) {
  return {g[0].to_string(), g[1].to_string(), g[2].to_string()};
}

}  // namespace

TEST_CASE("approximant f-vector and Euler characteristic") {
  const auto& c = fx().complex;
  CHECK(c.vertices == 4);
  CHECK(c.edges == 36);
  CHECK(c.faces == 56);
  CHECK(c.euler_characteristic() == 24);
  CHECK(c.boundary2.rows() == 36);
  CHECK(c.boundary2.cols() == 56);
  CHECK(c.boundary1.rows() == 4);
  CHECK(c.boundary1.cols() == 36);
  const auto& h = fx().cohomology.approximant;
  CHECK(h[0].free_rank - h[1].free_rank + h[2].free_rank == c.euler_characteristic());
}

TEST_CASE("boundary of a boundary vanishes") {
  CHECK((fx().complex.boundary1 * fx().complex.boundary2).is_zero());
  // Every face has four sides and four corners.
  for (const auto& fe : fx().complex.face_edges) {
    for (int e : fe) CHECK((e >= 0 && e < 36));
  }
  for (const auto& fv : fx().complex.face_vertices) {
    for (int v : fv) CHECK((v >= 0 && v < 4));
  }
}

TEST_CASE("approximant cohomology") {
  CHECK(names(fx().cohomology.approximant) == std::vector<std::string>{"Z", "Z^4", "Z^27 + Z_4"});
}

TEST_CASE("approximant cohomology agrees with F_2 and F_3 Betti numbers") {
  // Universal coefficients: dim H^k(F_p) = rank H^k + t_p(H^k) + t_p(H^(k+1)).
  const auto& h = fx().cohomology.approximant;
  for (long p : {2L, 3L, 5L}) {
    auto b = betti_mod(fx().complex, p);
    for (int k = 0; k < 3; ++k) {
      int expect = h[k].free_rank + torsion_count(h[k], p) + (k < 2 ? torsion_count(h[k + 1], p) : 0);
      CHECK(b[k] == expect);
    }
  }
}

TEST_CASE("hull cohomology") {
  const auto& r = fx().cohomology;
  CHECK(r.hull[0].to_string() == "Z");
  CHECK(r.hull[1].to_string() == "Z[1/2]^2 + Z");
  CHECK(r.hull[2].to_string() == "Z[1/4] + Z[1/2]^10 + Z^8 + Z_4");
  CHECK(r.spectra[2] == std::map<mpz_class, int>{{1, 8}, {2, 10}, {4, 1}});
  CHECK(r.spectra[1] == std::map<mpz_class, int>{{1, 1}, {2, 2}});
  CHECK(r.spectra[0] == std::map<mpz_class, int>{{1, 1}});
  CHECK(r.hull[2].eigen_index == 2);
}

TEST_CASE("action on 2-cochains is the transposed substitution matrix") {
  const auto& act = fx().action;
  auto m = substitution_matrix(fx().rules.normal);
  CHECK(act.A2 == IntegerMatrix::from_rows(m.entries).transpose());
  // Top eigenvalue 4 on faces, and the cochain maps commute with coboundaries.
  auto d0 = fx().complex.boundary1.transpose(), d1 = fx().complex.boundary2.transpose();
  CHECK(act.A1 * d0 == d0 * act.A0);
  CHECK(act.A2 * d1 == d1 * act.A1);
  CHECK(char_poly(act.A2).eval(mpz_class(4)) == 0);
  CHECK(act.A0.rows() == 4);
  CHECK(act.A1.rows() == 36);
}

TEST_CASE("complex requires border forcing") {
  CheckResult failed;
  failed.ok = false;
  failed.violations.push_back({"border", {0}, "not forced"});
  CHECK_THROWS_AS(build_complex(fx().rules.catalog.size(), fx().adjacency, failed), PreconditionError);
}

TEST_CASE("cohomology of small complexes") {
  // One vertex, edges a and b, one face.
  IntegerMatrix b1(1, 2);
  auto torus = approximant_cohomology(complex_from_boundaries(IntegerMatrix(2, 1), b1));
  CHECK(torus.h[0].group.to_string() == "Z");
  CHECK(torus.h[1].group.to_string() == "Z^2");
  CHECK(torus.h[2].group.to_string() == "Z");
  // Klein bottle: the face reads a b a^-1 b.
  auto klein = approximant_cohomology(complex_from_boundaries(IntegerMatrix{{0}, {2}}, b1));
  CHECK(klein.h[1].group.to_string() == "Z");
  CHECK(klein.h[2].group.to_string() == "Z_2");
  // Projective plane: a a.
  auto rp2 = approximant_cohomology(complex_from_boundaries(IntegerMatrix{{2}}, IntegerMatrix(1, 1)));
  CHECK(rp2.h[0].group.to_string() == "Z");
  CHECK(rp2.h[1].group.to_string() == "0");
  CHECK(rp2.h[2].group.to_string() == "Z_2");
  CHECK_THROWS(complex_from_boundaries(IntegerMatrix{{1}}, IntegerMatrix{{1}}));
}
