#include "robinson/linalg.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "robinson/errors.hpp"

namespace robinson {

namespace {

constexpr const char* kModule = "exact-linalg";

void require(bool ok, const char* check, const char* msg) {
  if (!ok) throw PreconditionError(kModule, check, msg);
}

}  // namespace

IntegerMatrix::IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
  for (const auto& r : rows) {
    require(static_cast<int>(r.size()) == cols_, "IntegerMatrix", "ragged rows");
    for (long v : r) data_.emplace_back(v);
  }
}

IntegerMatrix IntegerMatrix::identity(int n) {
  IntegerMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  IntegerMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    require(static_cast<int>(rows[i].size()) == c, "IntegerMatrix", "ragged rows");
    for (int j = 0; j < c; ++j) m(i, j) = static_cast<long>(rows[i][j]);
  }
  return m;
}

IntegerMatrix IntegerMatrix::diagonal(const std::vector<long>& entries) {
  int n = static_cast<int>(entries.size());
  IntegerMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = entries[i];
  return m;
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

IntegerMatrix IntegerMatrix::block(int row0, int col0, int rows, int cols) const {
  require(row0 >= 0 && col0 >= 0 && row0 + rows <= rows_ && col0 + cols <= cols_, "block", "out of range");
  IntegerMatrix b(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) b(i, j) = (*this)(row0 + i, col0 + j);
  }
  return b;
}

IntegerMatrix IntegerMatrix::hconcat(const IntegerMatrix& a, const IntegerMatrix& b) {
  require(a.rows_ == b.rows_, "hconcat", "row counts differ");
  IntegerMatrix m(a.rows_, a.cols_ + b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
    for (int j = 0; j < b.cols_; ++j) m(i, a.cols_ + j) = b(i, j);
  }
  return m;
}

bool IntegerMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const mpz_class& v) { return v == 0; });
}

IntegerMatrix IntegerMatrix::power(int k) const {
  require(square(), "power", "matrix not square");
  IntegerMatrix result = identity(rows_), base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

mpz_class IntegerMatrix::determinant() const {
  require(square(), "determinant", "matrix not square");
  const int n = rows_;
  if (n == 0) return 1;
  IntegerMatrix a = *this;
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i) {
        if (a(i, k) != 0) {
          swap = i;
          break;
        }
      }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        mpz_class v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = v;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

int IntegerMatrix::rank() const { return smith_normal_form(*this).rank; }

std::vector<std::vector<std::int64_t>> IntegerMatrix::to_int64() const {
  std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      const auto& v = (*this)(i, j);
      if (!v.fits_slong_p()) throw ArithmeticError(kModule, "to_int64", "entry exceeds 64 bits");
      out[i][j] = v.get_si();
    }
  }
  return out;
}

std::string IntegerMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
  require(a.cols_ == b.rows_, "multiply", "dimension mismatch");
  IntegerMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int k = 0; k < a.cols_; ++k) {
      const mpz_class& v = a(i, k);
      if (v == 0) continue;
      for (int j = 0; j < b.cols_; ++j) {
        if (b(k, j) != 0) c(i, j) += v * b(k, j);
      }
    }
  }
  return c;
}

IntegerMatrix operator+(const IntegerMatrix& a, const IntegerMatrix& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "add", "dimension mismatch");
  IntegerMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

IntegerMatrix operator-(const IntegerMatrix& a, const IntegerMatrix& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "subtract", "dimension mismatch");
  IntegerMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

IntegerMatrix operator*(const mpz_class& s, const IntegerMatrix& a) {
  IntegerMatrix c = a;
  for (auto& v : c.data_) v *= s;
  return c;
}

bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::vector<mpz_class> SmithForm::invariant_factors() const {
  std::vector<mpz_class> out;
  for (int i = 0; i < rank; ++i) out.push_back(D(i, i));
  return out;
}

SmithForm smith_normal_form(const IntegerMatrix& m) {
  const int r = m.rows(), c = m.cols();
  IntegerMatrix D = m, U = IntegerMatrix::identity(r), V = IntegerMatrix::identity(c);

  auto swap_rows = [&](int a, int b) {
    if (a == b) return;
    for (int j = 0; j < c; ++j) std::swap(D(a, j), D(b, j));
    for (int j = 0; j < r; ++j) std::swap(U(a, j), U(b, j));
  };
  auto swap_cols = [&](int a, int b) {
    if (a == b) return;
    for (int i = 0; i < r; ++i) std::swap(D(i, a), D(i, b));
    for (int i = 0; i < c; ++i) std::swap(V(i, a), V(i, b));
  };
  // row a -= q * row b
  auto sub_row = [&](int a, int b, const mpz_class& q) {
    if (q == 0) return;
    for (int j = 0; j < c; ++j) D(a, j) -= q * D(b, j);
    for (int j = 0; j < r; ++j) U(a, j) -= q * U(b, j);
  };
  auto sub_col = [&](int a, int b, const mpz_class& q) {
    if (q == 0) return;
    for (int i = 0; i < r; ++i) D(i, a) -= q * D(i, b);
    for (int i = 0; i < c; ++i) V(i, a) -= q * V(i, b);
  };

  int k = 0;
  for (; k < std::min(r, c); ++k) {
    while (true) {
      // Smallest nonzero entry of the trailing block as pivot.
      int pi = -1, pj = -1;
      for (int i = k; i < r; ++i) {
        for (int j = k; j < c; ++j) {
          if (D(i, j) != 0 && (pi < 0 || abs(D(i, j)) < abs(D(pi, pj)))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi < 0) goto done;
      swap_rows(k, pi);
      swap_cols(k, pj);
      bool clean = true;
      for (int i = k + 1; i < r; ++i) {
        if (D(i, k) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), D(i, k).get_mpz_t(), D(k, k).get_mpz_t());
        sub_row(i, k, q);
        if (D(i, k) != 0) clean = false;
      }
      for (int j = k + 1; j < c; ++j) {
        if (D(k, j) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), D(k, j).get_mpz_t(), D(k, k).get_mpz_t());
        sub_col(j, k, q);
        if (D(k, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold an offending row into the pivot row.
      int bad = -1;
      for (int i = k + 1; i < r && bad < 0; ++i) {
        for (int j = k + 1; j < c; ++j) {
          if (D(i, j) % D(k, k) != 0) {
            bad = i;
            break;
          }
        }
      }
      if (bad < 0) break;
      sub_row(k, bad, -1);
    }
    if (D(k, k) < 0) {
      for (int j = 0; j < c; ++j) D(k, j) = -D(k, j);
      for (int j = 0; j < r; ++j) U(k, j) = -U(k, j);
    }
  }
done:
  return {std::move(U), std::move(D), std::move(V), k};
}

mpz_class IntegerPolynomial::eval(const mpz_class& x) const {
  mpz_class v = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

IntegerMatrix IntegerPolynomial::eval(const IntegerMatrix& m) const {
  require(m.square(), "eval", "matrix not square");
  IntegerMatrix v(m.rows(), m.cols());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    v = v * m + *it * IntegerMatrix::identity(m.rows());
  }
  return v;
}

std::map<mpz_class, int> IntegerPolynomial::integer_roots() const {
  std::map<mpz_class, int> roots;
  std::vector<mpz_class> p = coeffs;
  while (!p.empty() && p.back() == 0) p.pop_back();
  // Divide out x^k first.
  int zeros = 0;
  while (p.size() > 1 && p.front() == 0) {
    p.erase(p.begin());
    ++zeros;
  }
  if (zeros) roots[0] = zeros;
  auto divide = [&](const mpz_class& r) {
    // Synthetic division by (x - r); returns false if r is not a root.
    std::vector<mpz_class> q(p.size() - 1);
    mpz_class carry = 0;
    for (int i = static_cast<int>(p.size()) - 1; i >= 1; --i) {
      carry = p[i] + carry * r;
      q[i - 1] = carry;
    }
    if (p[0] + carry * r != 0) return false;
    p = std::move(q);
    return true;
  };
  while (p.size() > 1) {
    mpz_class c = abs(p.front());
    bool found = false;
    // Candidate roots are the divisors of the constant term.
    for (mpz_class d = 1; d * d <= c && !found; ++d) {
      if (c % d != 0) continue;
      for (const mpz_class& cand : {d, mpz_class(-d), mpz_class(c / d), mpz_class(-(c / d))}) {
        if (divide(cand)) {
          ++roots[cand];
          found = true;
          break;
        }
      }
    }
    if (!found) break;
  }
  return roots;
}

std::string IntegerPolynomial::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& c = coeffs[i];
    if (c == 0) continue;
    mpz_class a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (a != 1 || i == 0) os << a.get_str();
    if (i > 0) os << "x";
    if (i > 1) os << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

IntegerPolynomial char_poly(const IntegerMatrix& m) {
  require(m.square(), "char_poly", "matrix not square");
  const int n = m.rows();
  // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
  std::vector<mpz_class> c(n + 1);
  c[n] = 1;
  IntegerMatrix mk(n, n);
  for (int k = 1; k <= n; ++k) {
    mk = mk + c[n - k + 1] * IntegerMatrix::identity(n);
    IntegerMatrix am = m * mk;
    mpz_class tr = 0;
    for (int i = 0; i < n; ++i) tr += am(i, i);
    mpz_class q = -tr;
    if (q % k != 0) throw ArithmeticError(kModule, "char_poly", "inexact division");
    c[n - k] = q / k;
    mk = am;
  }
  return {c};
}

IntegerMatrix integer_kernel(const IntegerMatrix& m) {
  auto s = smith_normal_form(m);
  return s.V.columns(s.rank, m.cols() - s.rank);
}

IntegerMatrix inverse_unimodular(const IntegerMatrix& m) {
  require(m.square(), "inverse_unimodular", "matrix not square");
  // U M V = I gives M^-1 = V U.
  auto s = smith_normal_form(m);
  for (int i = 0; i < m.rows(); ++i) {
    if (s.D(i, i) != 1) throw ArithmeticError(kModule, "inverse_unimodular", "matrix not unimodular");
  }
  return s.V * s.U;
}

std::pair<IntegerMatrix, IntegerMatrix> saturated_image(const IntegerMatrix& m) {
  // M = U^-1 D V^-1, so the saturated column space is spanned by the first
  // rank columns of U^-1 and the first rank rows of U are a left inverse.
  auto s = smith_normal_form(m);
  return {inverse_unimodular(s.U).columns(0, s.rank), s.U.rows_range(0, s.rank)};
}

std::string AbelianGroupDescriptor::to_string() const {
  std::vector<std::string> parts;
  if (free_rank == 1) parts.push_back("Z");
  if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
  for (const auto& d : torsion) parts.push_back("Z_" + d.get_str());
  if (parts.empty()) return "0";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += " + " + parts[i];
  return s;
}

AbelianGroupDescriptor cokernel(const IntegerMatrix& m) {
  auto s = smith_normal_form(m);
  AbelianGroupDescriptor g;
  g.free_rank = m.rows() - s.rank;
  for (const auto& d : s.invariant_factors()) {
    if (d != 1) g.torsion.push_back(d);
  }
  return g;
}

int DirectLimitDescriptor::free_rank() const {
  int r = 0;
  for (const auto& [b, m] : summands) r += m;
  return r;
}

std::string DirectLimitDescriptor::to_string() const {
  std::vector<std::string> parts;
  for (const auto& [b, m] : summands) {
    std::string base = b == 1 ? "Z" : "Z[1/" + b.get_str() + "]";
    parts.push_back(m == 1 ? base : base + "^" + std::to_string(m));
  }
  for (const auto& d : torsion) parts.push_back("Z_" + d.get_str());
  if (parts.empty()) return "0";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += " + " + parts[i];
  return s;
}

namespace {

// Stable image of an endomorphism of a finite abelian group given by
// generators of orders `orders` and the action matrix (columns are images).
std::vector<mpz_class> stable_torsion(const std::vector<mpz_class>& orders, const IntegerMatrix& a) {
  const int t = static_cast<int>(orders.size());
  if (t == 0) return {};
  mpz_class size = 1;
  for (const auto& d : orders) size *= d;
  if (size > (1 << 20)) throw PreconditionError(kModule, "direct_limit", "torsion subgroup too large to enumerate");

  using Element = std::vector<long>;
  auto reduce = [&](Element e) {
    for (int i = 0; i < t; ++i) {
      long d = orders[i].get_si();
      e[i] = ((e[i] % d) + d) % d;
    }
    return e;
  };
  auto image = [&](const Element& e) {
    Element out(t, 0);
    for (int i = 0; i < t; ++i) {
      mpz_class v = 0;
      for (int j = 0; j < t; ++j) v += a(i, j) * e[j];
      v %= orders[i];
      out[i] = v.get_si();
    }
    return reduce(out);
  };

  std::set<Element> current;
  Element e(t, 0);
  while (true) {
    current.insert(e);
    int i = 0;
    while (i < t && ++e[i] == orders[i].get_si()) e[i++] = 0;
    if (i == t) break;
  }
  while (true) {
    std::set<Element> next;
    for (const auto& x : current) next.insert(image(x));
    if (next == current) break;
    current = std::move(next);
  }

  // The stable subgroup S as P / diag(orders) Z^t, P spanned by lifts of S.
  IntegerMatrix gens(t, static_cast<int>(current.size()) + t);
  int col = 0;
  for (const auto& x : current) {
    for (int i = 0; i < t; ++i) gens(i, col) = x[i];
    ++col;
  }
  IntegerMatrix dmat(t, t);
  for (int i = 0; i < t; ++i) {
    gens(i, col + i) = orders[i];
    dmat(i, i) = orders[i];
  }
  auto s = smith_normal_form(gens);
  // Basis of P: U^-1 diag(d'), so diag(orders) = U^-1 diag(d') X.
  IntegerMatrix x = s.U * dmat;
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      if (x(i, j) % s.D(i, i) != 0) throw ArithmeticError(kModule, "direct_limit", "inexact torsion division");
      x(i, j) /= s.D(i, i);
    }
  }
  std::vector<mpz_class> out;
  for (const auto& d : smith_normal_form(x).invariant_factors()) {
    if (d != 1) out.push_back(d);
  }
  return out;
}

std::vector<mpz_class> prime_divisors(mpz_class n) {
  n = abs(n);
  std::vector<mpz_class> out;
  for (mpz_class p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

DirectLimitDescriptor direct_limit(const AbelianGroupDescriptor& g, const IntegerMatrix& a) {
  const int f = g.free_rank, t = static_cast<int>(g.torsion.size());
  require(a.rows() == f + t && a.cols() == f + t, "direct_limit", "action size does not match the group");
  // Torsion must map into torsion.
  for (int j = f; j < f + t; ++j) {
    for (int i = 0; i < f; ++i) {
      if (a(i, j) != 0) throw PreconditionError(kModule, "direct_limit", "torsion generator mapped to a free element");
    }
  }
  DirectLimitDescriptor out;
  out.torsion = stable_torsion(g.torsion, a.block(f, f, t, t));
  if (f == 0) return out;

  IntegerMatrix b = a.block(0, 0, f, f);
  auto [lattice, left] = saturated_image(b.power(f));
  const int r = lattice.cols();
  if (r == 0) return out;
  IntegerMatrix c = left * b * lattice;
  if (!(lattice * c == b * lattice)) {
    throw ArithmeticError(kModule, "direct_limit", "eventual image not invariant");
  }
  auto roots = char_poly(c).integer_roots();
  int found = 0;
  for (const auto& [lambda, mult] : roots) found += mult;
  if (found != r) {
    throw NonIntegerSpectrumError(kModule, "direct_limit", "eventual-image map has non-integer eigenvalues");
  }
  // Eigen-lattices must be full (diagonalizable) and together span the
  // eventual-image lattice.
  IntegerMatrix basis(r, 0);
  for (const auto& [lambda, mult] : roots) {
    IntegerMatrix shifted = c - lambda * IntegerMatrix::identity(r);
    IntegerMatrix kernel = integer_kernel(shifted);
    if (kernel.cols() != mult) {
      throw NonSplitError(kModule, "direct_limit", "eventual-image map is not diagonalizable");
    }
    basis = IntegerMatrix::hconcat(basis, kernel);
  }
  mpz_class index = abs(basis.determinant());
  // Eigenvalues with the same prime divisors give isomorphic summands, and a
  // group's lattice L becomes L[1/primes] in the limit, so only the index of
  // the per-group lattices matters. A prime p of that index is harmless when
  // all groups but one are divisible by p: those become Q-vector spaces
  // locally at p.
  std::map<std::vector<mpz_class>, std::vector<mpz_class>> groups;
  for (const auto& [lambda, mult] : roots) groups[prime_divisors(lambda)].push_back(lambda);
  IntegerMatrix grouped(r, 0);
  for (const auto& [primes, lambdas] : groups) {
    IntegerMatrix prod = IntegerMatrix::identity(r);
    for (const auto& lambda : lambdas) prod = prod * (c - lambda * IntegerMatrix::identity(r));
    grouped = IntegerMatrix::hconcat(grouped, integer_kernel(prod));
  }
  mpz_class rest = abs(grouped.determinant());
  for (mpz_class p = 2; rest > 1; ++p) {
    if (p * p > rest) p = rest;
    if (rest % p != 0) continue;
    while (rest % p == 0) rest /= p;
    int coprime = 0;
    for (const auto& [primes, lambdas] : groups) coprime += lambdas.front() % p != 0;
    if (coprime > 1) {
      throw NonSplitError(kModule, "direct_limit",
                          "eigen-lattices have index " + index.get_str() + " at prime " + p.get_str());
    }
  }
  out.eigen_index = index;
  std::map<mpz_class, int, std::greater<>> by_base;
  for (const auto& [lambda, mult] : roots) {
    out.eigenvalues[lambda] = mult;
    by_base[abs(lambda)] += mult;
  }
  for (const auto& [base, mult] : by_base) out.summands.push_back({base, mult});
  return out;
}

}  // namespace robinson
