#pragma once

// Artin-Mazur zeta function of the substitution from the action on
// cohomology, its series and solenoid factorization, and the direct count of
// substitution-periodic points.

#include <gmpxx.h>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "robinson/linalg.hpp"
#include "robinson/patch.hpp"
#include "robinson/substitution.hpp"

namespace robinson {

// Numerator and denominator are products of factors (1 - c z), stored as
// multiplicities by c, times a residual polynomial with constant term 1.
struct RationalFunctionZ {
  std::map<mpz_class, int> numerator, denominator;
  IntegerPolynomial numerator_residual{{1}}, denominator_residual{{1}};

  // Common linear factors cancelled, zero multiplicities dropped.
  RationalFunctionZ reduced() const;
  std::string to_string() const;

  // Identity of rational functions (compares reduced forms).
  friend bool operator==(const RationalFunctionZ& a, const RationalFunctionZ& b);
  friend RationalFunctionZ operator*(const RationalFunctionZ& a, const RationalFunctionZ& b);
  RationalFunctionZ power(int k) const;  // k may be negative
};

// det(1 - z A) split into linear factors over the integer eigenvalues.
RationalFunctionZ det_one_minus_z(const IntegerMatrix& a);

// actions[k] acts on H^k, k = 0..d. Factors for H^{d-k} go to the numerator
// for odd k and to the denominator for even k.
RationalFunctionZ zeta_from_spectra(const std::vector<std::map<mpz_class, int>>& spectra);
RationalFunctionZ zeta_from_matrices(const std::vector<IntegerMatrix>& actions);

struct ZetaSeries {
  std::vector<mpz_class> a;  // a[m - 1] = a_m

  // Number of orbits of exact period m, by Moebius inversion.
  std::vector<mpz_class> primitive_orbits() const;
};

// Throws ArithmeticError if the coefficients are not counts of periodic
// points (negative a_m or non-integral orbit numbers).
ZetaSeries zeta_series(const RationalFunctionZ& zeta, int max_power);

// Partial zeta functions of the components.
RationalFunctionZ solenoid_2d_zeta();  // (1-2z)^2 / ((1-z)(1-4z))
RationalFunctionZ solenoid_1d_zeta();  // (1-z) / (1-2z)
RationalFunctionZ fixed_point_zeta();  // 1 / (1-z)

struct SolenoidFactorization {
  int n2d = 0, n1d = 0, nfp = 0;

  RationalFunctionZ reconstruct() const;
};

// Throws NonSolenoidError (with the residual exponents) if zeta is not such a
// product with nonnegative multiplicities.
SolenoidFactorization factor_zeta(const RationalFunctionZ& zeta);

// sigma^m of one doubled tile with the center-anchored overlapping geometry:
// a (2^{m+1} - 1)^2 block centered on the origin.
DoubledPatch overlap_power(const OverlapRule& r, int tile, int m);

struct PeriodicPoint {
  LatticePoint anchor;  // k in {0..2^m-2}^2
  int tile = 0;
};

struct PeriodicPointReport {
  int m = 0;
  std::vector<PeriodicPoint> points;

  int count() const noexcept { return static_cast<int>(points.size()); }
};

PeriodicPointReport enumerate_periodic_points(const OverlapRule& r, int m);

enum class CenterKind {
  supertile_center,  // a cross, the center of nested supertiles of all orders
  fault_crossing,    // a horizontal and a vertical cross-free line meet
  fault_row,         // exactly one cross-free line through the center
  undetermined,
};

std::string to_string(CenterKind k);

struct FixedPointClass {
  int tile = 0;
  CenterKind kind = CenterKind::undetermined;
  // Cross-free half-lines leaving the center tile (east, north, west, south)
  // and the quadrants they cut out.
  int free_half_lines = 0;
  int supertiles = 0;
  // Through-line decoration of a complete cross-free line through the center.
  std::optional<FaultRowClass> row, column;
  bool legal = false;  // unit patch of sigma^depth(t)
};

struct FixedPointAccounting {
  std::vector<FixedPointClass> points;
  std::map<std::string, int> per_kind;
  int horizontal_classes = 0, vertical_classes = 0;
  int undetermined = 0;
  // One fixed point in the 2d solenoid, one per line class beyond the first
  // on each axis in the 1d solenoids, the rest isolated.
  SolenoidFactorization partition;
};

FixedPointAccounting classify_fixed_points(const TileSet& tiles, const DoubledCatalog& cat,
                                           const OverlapRule& r, int depth = 6);

}  // namespace robinson
