#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fixture.hpp"
#include "robinson/errors.hpp"
#include "robinson/zeta.hpp"

using namespace robinson;

namespace {

const testing::Fixture& fx() { return testing::fixture(); }

RationalFunctionZ linear(std::map<mpz_class, int> num, std::map<mpz_class, int> den) {
  RationalFunctionZ r;
  r.numerator = std::move(num);
  r.denominator = std::move(den);
  return r;
}

const RationalFunctionZ& hull_zeta() {
  static const auto z = zeta_from_spectra({fx().cohomology.spectra.begin(), fx().cohomology.spectra.end()});
  return z;
}

// Rational action on H^k: drop the torsion generators.
std::vector<IntegerMatrix> free_parts() {
  std::vector<IntegerMatrix> out;
  for (int k = 0; k < 3; ++k) {
    int f = fx().cohomology.approximant[k].free_rank;
    out.push_back(fx().action.a[k].block(0, 0, f, f));
  }
  return out;
}

mpz_class trace(const IntegerMatrix& m) {
  mpz_class t = 0;
  for (int i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

// Lefschetz numbers: a_m = sum_k (-1)^k tr(A_k^m).
std::vector<mpz_class> lefschetz(const std::vector<IntegerMatrix>& maps, int max_power) {
  std::vector<mpz_class> out;
  for (int m = 1; m <= max_power; ++m) {
    mpz_class a = 0;
    for (std::size_t k = 0; k < maps.size(); ++k) a += (k % 2 ? -1 : 1) * trace(maps[k].power(m));
    out.push_back(a);
  }
  return out;
}

// sigma^m(t) at offset (x, y), straight from the overlapping rule.
int sigma_at(const OverlapRule& r, int t, int m, int x, int y) {
  if (m == 0) return t;
  int px = x / 2, py = y / 2;  // truncation keeps the remainder in -1..1
  return r.image(sigma_at(r, t, m - 1, px, py), x - 2 * px, y - 2 * py);
}

int count_periodic(const OverlapRule& r, int m) {
  const int reach = (1 << (m - 1)) - 1;
  int n = 0;
  for (int t = 0; t < r.size(); ++t) {
    for (int y = -reach; y <= reach; ++y) {
      for (int x = -reach; x <= reach; ++x) n += sigma_at(r, t, m, x, y) == t;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("zeta of the hull") {
  const auto& z = hull_zeta();
  CHECK(z.to_string() == "(1 - z) (1 - 2z)^2 / ((1 - z)^9 (1 - 2z)^10 (1 - 4z))");
  CHECK(z.reduced().to_string() == "1 / ((1 - z)^8 (1 - 2z)^8 (1 - 4z))");
  CHECK(z == linear({}, {{1, 8}, {2, 8}, {4, 1}}));
}

TEST_CASE("second form: one 2d solenoid, ten 1d solenoids, 17 fixed points") {
  auto product = solenoid_2d_zeta() * solenoid_1d_zeta().power(10) * fixed_point_zeta().power(17);
  CHECK(product == hull_zeta());
  auto f = factor_zeta(hull_zeta());
  CHECK(f.n2d == 1);
  CHECK(f.n1d == 10);
  CHECK(f.nfp == 17);
  CHECK(f.reconstruct() == hull_zeta());
}

TEST_CASE("partial zeta functions") {
  CHECK(solenoid_2d_zeta() == linear({{2, 2}}, {{1, 1}, {4, 1}}));
  CHECK(solenoid_1d_zeta() == linear({{1, 1}}, {{2, 1}}));
  CHECK(fixed_point_zeta() == linear({}, {{1, 1}}));
  // A single point: one fixed point for every power.
  auto s = zeta_series(fixed_point_zeta(), 5);
  CHECK(s.a == std::vector<mpz_class>(5, 1));
  CHECK(s.primitive_orbits() == std::vector<mpz_class>{1, 0, 0, 0, 0});
  // S_2^2 has 4^m - 2 * 2^m + 1 = (2^m - 1)^2 points of period m.
  auto s2 = zeta_series(solenoid_2d_zeta(), 4);
  CHECK(s2.a == std::vector<mpz_class>{1, 9, 49, 225});
}

TEST_CASE("cochain zeta agrees with the cohomology zeta") {
  const auto& act = fx().action;
  auto cochain = zeta_from_matrices({act.A0, act.A1, act.A2});
  CHECK(cochain == hull_zeta());
  CHECK_FALSE(cochain.to_string() == hull_zeta().to_string());
  auto cohom = zeta_from_matrices(free_parts());
  CHECK(cohom == hull_zeta());
}

TEST_CASE("series coefficients equal the Lefschetz numbers") {
  auto s = zeta_series(hull_zeta(), 6);
  CHECK(s.a == std::vector<mpz_class>{28, 56, 136, 392, 1288, 4616});
  for (int m = 1; m <= 6; ++m) CHECK(s.a[m - 1] == (mpz_class(1) << (2 * m)) + 8 * (mpz_class(1) << m) + 8);
  const auto& act = fx().action;
  CHECK(lefschetz(free_parts(), 6) == s.a);
  CHECK(lefschetz({act.A0, act.A1, act.A2}, 6) == s.a);
  auto orbits = s.primitive_orbits();
  CHECK(orbits[0] == 28);
  CHECK(orbits[1] == 14);  // (56 - 28) / 2
  CHECK(orbits[2] == 36);  // (136 - 28) / 3
}

TEST_CASE("periodic points from the overlapping rule") {
  auto s = zeta_series(hull_zeta(), 4);
  for (int m = 1; m <= 4; ++m) {
    auto r = enumerate_periodic_points(fx().rules.overlap, m);
    CHECK(r.m == m);
    CHECK(r.count() == count_periodic(fx().rules.overlap, m));
    CHECK(r.count() == s.a[m - 1]);
  }
  CHECK_THROWS_AS(enumerate_periodic_points(fx().rules.overlap, 0), PreconditionError);
}

TEST_CASE("overlap power is the iterated image") {
  const auto& r = fx().rules.overlap;
  for (int t : {0, 7, 31}) {
    auto p = overlap_power(r, t, 3);
    CHECK(p.width() == 15);
    CHECK(p.origin() == LatticePoint{-7, -7});
    for (int y = -7; y <= 7; ++y) {
      for (int x = -7; x <= 7; ++x) CHECK(p.at(x, y) == sigma_at(r, t, 3, x, y));
    }
  }
}

TEST_CASE("det(1 - zA) keeps irreducible residuals") {
  auto fib = det_one_minus_z(IntegerMatrix{{1, 1}, {1, 0}});
  CHECK(fib.numerator.empty());
  CHECK(fib.numerator_residual == IntegerPolynomial{{1, -1, -1}});
  auto d = det_one_minus_z(IntegerMatrix{{2, 1}, {0, 2}});
  CHECK(d.numerator == std::map<mpz_class, int>{{2, 2}});
  CHECK(det_one_minus_z(IntegerMatrix(0, 0)) == linear({}, {}));
}

TEST_CASE("series and factorization errors") {
  // a_m = 2 - (-1)^m gives a negative count of orbits of period 2.
  CHECK_THROWS_AS(zeta_series(linear({{-1, 1}}, {{1, 2}}), 3), ArithmeticError);
  CHECK_THROWS_AS(zeta_series(linear({{1, 2}}, {}), 2), ArithmeticError);
  CHECK_THROWS_AS(factor_zeta(linear({}, {{3, 1}})), NonSolenoidError);
  CHECK_THROWS_AS(factor_zeta(linear({{2, 1}}, {})), NonSolenoidError);
  auto one = factor_zeta(linear({}, {{2, 1}}));
  CHECK(one.n2d == 0);
  CHECK(one.n1d == 1);
  CHECK(one.nfp == 1);
}

TEST_CASE("fixed point accounting") {
  auto acc = classify_fixed_points(fx().tiles, fx().rules.catalog, fx().rules.overlap, 6);
  REQUIRE(acc.points.size() == 28);
  CHECK(acc.per_kind == std::map<std::string, int>{{"fault-crossing", 24}, {"supertile-center", 4}});
  CHECK(acc.horizontal_classes == 6);
  CHECK(acc.vertical_classes == 6);
  CHECK(acc.undetermined == 0);
  CHECK(acc.partition.n2d == 1);
  CHECK(acc.partition.n1d == 10);
  CHECK(acc.partition.nfp == 17);
  int crosses = 0;
  std::set<std::array<int, 3>> rows, columns;
  for (const auto& p : acc.points) {
    CHECK(fx().rules.overlap.image(p.tile, 0, 0) == p.tile);
    CHECK(p.legal);
    CHECK(p.supertiles == 4);
    bool cross = fx().tiles.is_cross(fx().rules.catalog[p.tile].base);
    crosses += cross;
    CHECK((p.kind == CenterKind::supertile_center) == cross);
    if (p.kind == CenterKind::fault_crossing) {
      CHECK(p.free_half_lines == 4);
      // The center arm carries one through line.
      CHECK(p.row.has_value() != p.column.has_value());
      if (p.row) rows.insert({p.row->multiplicity, p.row->companion_side, p.row->direction});
      if (p.column) columns.insert({p.column->multiplicity, p.column->companion_side, p.column->direction});
    }
  }
  CHECK(crosses == 4);
  CHECK(rows.size() == 6);
  CHECK(columns.size() == 6);
}
