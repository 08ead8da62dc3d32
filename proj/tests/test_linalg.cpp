#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "robinson/errors.hpp"
#include "robinson/linalg.hpp"

using namespace robinson;

namespace {

// Leibniz expansion; only for small matrices.
mpz_class leibniz_det(const IntegerMatrix& m) {
  std::vector<int> perm(m.rows());
  std::iota(perm.begin(), perm.end(), 0);
  mpz_class total = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = i + 1; j < m.rows(); ++j) inversions += perm[i] > perm[j];
    }
    mpz_class term = inversions % 2 ? -1 : 1;
    for (int i = 0; i < m.rows(); ++i) term *= m(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

IntegerMatrix random_matrix(std::mt19937& rng, int r, int c, int lo = -4, int hi = 4) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntegerMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = d(rng);
  }
  return m;
}

bool unimodular(const IntegerMatrix& m) {
  auto d = m.determinant();
  return d == 1 || d == -1;
}

void check_smith(const IntegerMatrix& m) {
  auto s = smith_normal_form(m);
  CHECK(unimodular(s.U));
  CHECK(unimodular(s.V));
  CHECK(s.U * m * s.V == s.D);
  for (int i = 0; i < s.D.rows(); ++i) {
    for (int j = 0; j < s.D.cols(); ++j) {
      if (i != j) CHECK(s.D(i, j) == 0);
    }
  }
  auto f = s.invariant_factors();
  CHECK(static_cast<int>(f.size()) == s.rank);
  CHECK(s.rank == m.rank());
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(f[i] > 0);
    if (i + 1 < f.size()) CHECK(f[i + 1] % f[i] == 0);
  }
}

AbelianGroupDescriptor group(int free_rank, std::vector<long> torsion = {}) {
  AbelianGroupDescriptor g;
  g.free_rank = free_rank;
  for (long t : torsion) g.torsion.emplace_back(t);
  return g;
}

}  // namespace

TEST_CASE("Smith normal form of textbook examples") {
  IntegerMatrix m{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
  check_smith(m);
  CHECK(smith_normal_form(m).invariant_factors() == std::vector<mpz_class>{2, 6, 12});
  CHECK(smith_normal_form(IntegerMatrix{{2, 0}, {0, 3}}).invariant_factors() == std::vector<mpz_class>{1, 6});
  CHECK(smith_normal_form(IntegerMatrix{{0, 0}, {0, 0}}).rank == 0);
  check_smith(IntegerMatrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  CHECK(smith_normal_form(IntegerMatrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}).invariant_factors() ==
        std::vector<mpz_class>{1, 3});
}

TEST_CASE("Smith normal form of random rectangular matrices") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    int r = 1 + trial % 5, c = 1 + (trial / 5) % 6;
    check_smith(random_matrix(rng, r, c));
  }
}

TEST_CASE("determinant agrees with the Leibniz expansion") {
  std::mt19937 rng(3);
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      auto m = random_matrix(rng, n, n, -9, 9);
      CHECK(m.determinant() == leibniz_det(m));
    }
  }
  CHECK(IntegerMatrix{{1, 2}, {2, 4}}.determinant() == 0);
}

TEST_CASE("characteristic polynomial matches det(x I - M) pointwise") {
  std::mt19937 rng(5);
  for (int n = 1; n <= 5; ++n) {
    auto m = random_matrix(rng, n, n);
    auto p = char_poly(m);
    CHECK(p.degree() == n);
    CHECK(p.coeffs.back() == 1);
    for (long x = -3; x <= 3; ++x) {
      auto shifted = mpz_class(x) * IntegerMatrix::identity(n) - m;
      CHECK(p.eval(mpz_class(x)) == leibniz_det(shifted));
    }
    CHECK(p.eval(m).is_zero());
  }
  auto p = char_poly(IntegerMatrix{{2, 1}, {0, 2}});
  CHECK(p.integer_roots() == std::map<mpz_class, int>{{2, 2}});
  CHECK(p.to_string() == "x^2 - 4x + 4");
}

TEST_CASE("integer roots with multiplicity") {
  // (x - 1)^2 (x + 2) (x^2 + 1)
  IntegerPolynomial p{{2, -3, 2, -2, 0, 1}};
  CHECK(p.eval(mpz_class(1)) == 0);
  auto r = p.integer_roots();
  CHECK(r == std::map<mpz_class, int>{{1, 2}, {-2, 1}});
}

TEST_CASE("inverse of unimodular matrices") {
  IntegerMatrix m{{2, 3}, {1, 2}};
  auto inv = inverse_unimodular(m);
  CHECK(m * inv == IntegerMatrix::identity(2));
  CHECK(inv * m == IntegerMatrix::identity(2));
  CHECK_THROWS_AS(inverse_unimodular(IntegerMatrix{{2, 0}, {0, 1}}), ArithmeticError);
  CHECK_THROWS_AS(inverse_unimodular(IntegerMatrix{{1, 2, 3}}), PreconditionError);
}

TEST_CASE("integer kernels are saturated") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = random_matrix(rng, 2 + trial % 3, 5, -2, 2);
    auto k = integer_kernel(m);
    CHECK(k.cols() == m.cols() - m.rank());
    if (k.cols() == 0) continue;
    CHECK((m * k).is_zero());
    CHECK(k.rank() == k.cols());
    for (const auto& f : smith_normal_form(k).invariant_factors()) CHECK(f == 1);
  }
  // 2x + 4y = 0 has kernel generated by (2, -1), not (4, -2).
  auto k = integer_kernel(IntegerMatrix{{2, 4}});
  REQUIRE(k.cols() == 1);
  CHECK(abs(k(0, 0)) == 2);
  CHECK(abs(k(1, 0)) == 1);
}

TEST_CASE("saturated image comes with a left inverse") {
  IntegerMatrix m{{2, 0}, {0, 2}, {2, 2}};
  auto [basis, left] = saturated_image(m);
  CHECK(basis.cols() == 2);
  CHECK(left * basis == IntegerMatrix::identity(2));
  CHECK(IntegerMatrix::hconcat(basis, m).rank() == 2);
}

TEST_CASE("cokernels") {
  CHECK(cokernel(IntegerMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}) == group(0, {2, 6, 12}));
  CHECK(cokernel(IntegerMatrix{{2, 0}, {0, 3}}) == group(0, {6}));
  CHECK(cokernel(IntegerMatrix{{1, 1}, {1, 1}, {0, 0}}) == group(2));
  CHECK(cokernel(IntegerMatrix(3, 0)) == group(3));
  CHECK(cokernel(IntegerMatrix{{4}, {0}}).to_string() == "Z + Z_4");
}

TEST_CASE("direct limits of free groups") {
  CHECK(direct_limit(group(1), IntegerMatrix{{2}}).to_string() == "Z[1/2]");
  CHECK(direct_limit(group(1), IntegerMatrix{{1}}).to_string() == "Z");
  CHECK(direct_limit(group(1), IntegerMatrix{{0}}).to_string() == "0");
  CHECK(direct_limit(group(1), IntegerMatrix{{-3}}).to_string() == "Z[1/3]");

  auto d = direct_limit(group(3), IntegerMatrix::diagonal({4, 2, 1}));
  CHECK(d.to_string() == "Z[1/4] + Z[1/2] + Z");
  CHECK(d.free_rank() == 3);
  CHECK(d.eigenvalues == std::map<mpz_class, int>{{1, 1}, {2, 1}, {4, 1}});

  // The swap has eigen-lattices of index 2, but its eigenvalues are units.
  auto swap = direct_limit(group(2), IntegerMatrix{{0, 1}, {1, 0}});
  CHECK(swap.to_string() == "Z^2");
  CHECK(swap.eigen_index == 2);

  // Nilpotent part dies in the limit.
  CHECK(direct_limit(group(2), IntegerMatrix{{2, 0}, {1, 0}}).to_string() == "Z[1/2]");
}

TEST_CASE("direct limit errors") {
  CHECK_THROWS_AS(direct_limit(group(2), IntegerMatrix{{1, 1}, {1, 0}}), NonIntegerSpectrumError);
  CHECK_THROWS_AS(direct_limit(group(2), IntegerMatrix{{0, -1}, {1, 0}}), NonIntegerSpectrumError);
  CHECK_THROWS_AS(direct_limit(group(1), IntegerMatrix{{1, 1}}), PreconditionError);
  // Jordan block: one eigen-line only.
  CHECK_THROWS_AS(direct_limit(group(2), IntegerMatrix{{3, 1}, {0, 3}}), NonSplitError);
  // Eigenvalues 1 and 4 with eigenvectors (1, 0) and (1, 3): index 3, and 3
  // divides neither eigenvalue.
  CHECK_THROWS_AS(direct_limit(group(2), IntegerMatrix{{1, 1}, {0, 4}}), NonSplitError);
  // Same index at prime 2 with eigenvalues 1 and 3 is also not split.
  CHECK_THROWS_AS(direct_limit(group(2), IntegerMatrix{{1, 1}, {0, 3}}), NonSplitError);
}

TEST_CASE("direct limits with torsion") {
  CHECK(direct_limit(group(0, {4}), IntegerMatrix{{1}}).to_string() == "Z_4");
  CHECK(direct_limit(group(0, {4}), IntegerMatrix{{3}}).to_string() == "Z_4");
  CHECK(direct_limit(group(0, {4}), IntegerMatrix{{2}}).to_string() == "0");
  CHECK(direct_limit(group(1, {4}), IntegerMatrix{{2, 0}, {0, 1}}).to_string() == "Z[1/2] + Z_4");
}

TEST_CASE("int64 conversion and overflow") {
  IntegerMatrix m{{1, -2}};
  CHECK(m.to_int64() == std::vector<std::vector<std::int64_t>>{{1, -2}});
  IntegerMatrix big(1, 1);
  big(0, 0) = mpz_class("123456789012345678901234567890");
  CHECK_THROWS_AS(big.to_int64(), ArithmeticError);
  CHECK(IntegerMatrix{{2}}.power(70)(0, 0) == mpz_class("1180591620717411303424"));
}
