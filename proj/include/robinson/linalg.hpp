#pragma once

// Exact integer linear algebra on GMP integers: Smith normal form,
// characteristic polynomials, kernels, cokernels and direct limits of finitely
// generated abelian groups under an endomorphism.

#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace robinson {

class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}
  IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntegerMatrix identity(int n);
  static IntegerMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);
  static IntegerMatrix diagonal(const std::vector<long>& entries);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  mpz_class& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const mpz_class& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  IntegerMatrix transpose() const;
  IntegerMatrix block(int row0, int col0, int rows, int cols) const;
  // Columns [col0, col0 + count).
  IntegerMatrix columns(int col0, int count) const { return block(0, col0, rows_, count); }
  IntegerMatrix rows_range(int row0, int count) const { return block(row0, 0, count, cols_); }
  static IntegerMatrix hconcat(const IntegerMatrix& a, const IntegerMatrix& b);

  bool is_zero() const;
  IntegerMatrix power(int k) const;
  mpz_class determinant() const;  // Bareiss
  int rank() const;

  std::vector<std::vector<std::int64_t>> to_int64() const;  // throws ArithmeticError on overflow
  std::string to_string() const;

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
  friend IntegerMatrix operator+(const IntegerMatrix& a, const IntegerMatrix& b);
  friend IntegerMatrix operator-(const IntegerMatrix& a, const IntegerMatrix& b);
  friend IntegerMatrix operator*(const mpz_class& s, const IntegerMatrix& a);
  friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<mpz_class> data_;
};

struct SmithForm {
  IntegerMatrix U, D, V;  // U * M * V == D
  int rank = 0;

  std::vector<mpz_class> invariant_factors() const;  // nonzero diagonal
};

SmithForm smith_normal_form(const IntegerMatrix& m);

// Coefficients from the constant term upward.
struct IntegerPolynomial {
  std::vector<mpz_class> coeffs;

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  mpz_class eval(const mpz_class& x) const;
  IntegerMatrix eval(const IntegerMatrix& m) const;
  // Integer roots with multiplicity.
  std::map<mpz_class, int> integer_roots() const;
  std::string to_string() const;

  friend bool operator==(const IntegerPolynomial&, const IntegerPolynomial&) = default;
};

// det(x I - M), by Faddeev-LeVerrier with exact divisions.
IntegerPolynomial char_poly(const IntegerMatrix& m);

// Inverse of a matrix with determinant +-1; ArithmeticError otherwise.
IntegerMatrix inverse_unimodular(const IntegerMatrix& m);

// Basis (as columns) of the integer kernel; saturated.
IntegerMatrix integer_kernel(const IntegerMatrix& m);
// Basis (as columns) of the saturation of the column space; together with a
// left inverse P (P * basis == I).
std::pair<IntegerMatrix, IntegerMatrix> saturated_image(const IntegerMatrix& m);

struct AbelianGroupDescriptor {
  int free_rank = 0;
  std::vector<mpz_class> torsion;  // invariant factors d1 | d2 | ..., each > 1

  int generator_count() const noexcept { return free_rank + static_cast<int>(torsion.size()); }
  std::string to_string() const;
  friend bool operator==(const AbelianGroupDescriptor&, const AbelianGroupDescriptor&) = default;
};

AbelianGroupDescriptor cokernel(const IntegerMatrix& m);

struct DirectLimitDescriptor {
  // (inverted base, multiplicity); base 1 is plain Z. Bases descending.
  std::vector<std::pair<mpz_class, int>> summands;
  std::vector<mpz_class> torsion;
  // Eigenvalues of the map on the eventual image of the free part.
  std::map<mpz_class, int> eigenvalues;
  // Index of the sum of the eigen-lattices in the eventual-image lattice.
  mpz_class eigen_index = 1;

  int free_rank() const;
  std::string to_string() const;
  friend bool operator==(const DirectLimitDescriptor& a, const DirectLimitDescriptor& b) {
    return a.summands == b.summands && a.torsion == b.torsion;
  }
};

// colim(G -A-> G -A-> ...). A acts on the generators of G, free generators
// first, then one generator per torsion factor (rows of torsion generators
// read modulo their order). Throws NonIntegerSpectrumError or NonSplitError
// when the free part does not split into eigen-lattices with integer
// eigenvalues, PreconditionError if A does not respect the torsion.
DirectLimitDescriptor direct_limit(const AbelianGroupDescriptor& g, const IntegerMatrix& a);

}  // namespace robinson
