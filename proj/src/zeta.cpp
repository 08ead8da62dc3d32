#include "robinson/zeta.hpp"

#include <algorithm>
#include <set>

#include "robinson/errors.hpp"

namespace robinson {

namespace {

constexpr const char* kModule = "dynamics-zeta";

using Poly = std::vector<mpz_class>;

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

// p / (1 - c z), exact.
Poly divide_linear(const Poly& p, const mpz_class& c) {
  if (p.size() < 2) throw ArithmeticError(kModule, "det_one_minus_z", "linear factor does not divide");
  Poly q(p.size() - 1);
  q[0] = p[0];
  for (std::size_t k = 1; k < q.size(); ++k) q[k] = p[k] + c * q[k - 1];
  if (p.back() + c * q.back() != 0) throw ArithmeticError(kModule, "det_one_minus_z", "linear factor does not divide");
  return q;
}

// Power sums s_1..s_M of the inverse roots of p(z) = prod (1 - alpha z).
std::vector<mpz_class> inverse_root_power_sums(const Poly& p, int max_power) {
  if (p.empty() || p[0] != 1) throw ArithmeticError(kModule, "zeta_series", "residual with constant term != 1");
  std::vector<mpz_class> s(max_power + 1, 0);
  auto coeff = [&](int k) { return k < static_cast<int>(p.size()) ? p[k] : mpz_class(0); };
  for (int m = 1; m <= max_power; ++m) {
    mpz_class v = -m * coeff(m);
    for (int k = 1; k < m; ++k) v -= coeff(k) * s[m - k];
    s[m] = v;
  }
  return s;
}

std::string factor_string(const mpz_class& c, int mult) {
  std::string s = "(1 ";
  s += c < 0 ? "+ " : "- ";
  mpz_class a = abs(c);
  if (a != 1) s += a.get_str();
  s += "z)";
  if (mult != 1) s += "^" + std::to_string(mult);
  return s;
}

std::string residual_string(const IntegerPolynomial& p) {
  std::string s = p.to_string();
  std::replace(s.begin(), s.end(), 'x', 'z');
  return "(" + s + ")";
}

std::string side_string(const std::map<mpz_class, int>& f, const IntegerPolynomial& res) {
  std::vector<std::string> parts;
  for (const auto& [c, m] : f) parts.push_back(factor_string(c, m));
  if (res.degree() > 0) parts.push_back(residual_string(res));
  if (parts.empty()) return "1";
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : " ") + p;
  return s;
}

int moebius(int n) {
  int mu = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  return n > 1 ? -mu : mu;
}

}  // namespace

RationalFunctionZ RationalFunctionZ::reduced() const {
  RationalFunctionZ out;
  out.numerator_residual = numerator_residual;
  out.denominator_residual = denominator_residual;
  std::set<mpz_class> keys;
  for (const auto& [c, m] : numerator) keys.insert(c);
  for (const auto& [c, m] : denominator) keys.insert(c);
  for (const auto& c : keys) {
    if (c == 0) continue;
    auto n = numerator.count(c) ? numerator.at(c) : 0;
    auto d = denominator.count(c) ? denominator.at(c) : 0;
    if (n > d) out.numerator[c] = n - d;
    if (d > n) out.denominator[c] = d - n;
  }
  if (out.numerator_residual == out.denominator_residual) {
    out.numerator_residual = out.denominator_residual = IntegerPolynomial{{1}};
  }
  return out;
}

std::string RationalFunctionZ::to_string() const {
  std::string n = side_string(numerator, numerator_residual);
  std::string d = side_string(denominator, denominator_residual);
  if (d == "1") return n;
  bool single = denominator.size() + (denominator_residual.degree() > 0 ? 1 : 0) == 1;
  return n + " / " + (single ? d : "(" + d + ")");
}

RationalFunctionZ operator*(const RationalFunctionZ& a, const RationalFunctionZ& b) {
  RationalFunctionZ out = a;
  for (const auto& [c, m] : b.numerator) out.numerator[c] += m;
  for (const auto& [c, m] : b.denominator) out.denominator[c] += m;
  out.numerator_residual.coeffs = multiply(a.numerator_residual.coeffs, b.numerator_residual.coeffs);
  out.denominator_residual.coeffs = multiply(a.denominator_residual.coeffs, b.denominator_residual.coeffs);
  return out;
}

RationalFunctionZ RationalFunctionZ::power(int k) const {
  RationalFunctionZ base = *this;
  if (k < 0) {
    std::swap(base.numerator, base.denominator);
    std::swap(base.numerator_residual, base.denominator_residual);
    k = -k;
  }
  RationalFunctionZ out;
  for (int i = 0; i < k; ++i) out = out * base;
  return out;
}

bool operator==(const RationalFunctionZ& a, const RationalFunctionZ& b) {
  auto q = (a * b.power(-1)).reduced();
  return q.numerator.empty() && q.denominator.empty() &&
         q.numerator_residual.coeffs == q.denominator_residual.coeffs;
}

RationalFunctionZ det_one_minus_z(const IntegerMatrix& a) {
  if (!a.square()) throw PreconditionError(kModule, "zeta_from_action", "action matrix not square");
  RationalFunctionZ out;
  if (a.rows() == 0) return out;
  auto p = char_poly(a);
  Poly q(p.coeffs.rbegin(), p.coeffs.rend());
  trim(q);
  for (const auto& [r, m] : p.integer_roots()) {
    if (r == 0) continue;
    out.numerator[r] += m;
    for (int i = 0; i < m; ++i) q = divide_linear(q, r);
  }
  out.numerator_residual.coeffs = q;
  return out;
}

RationalFunctionZ zeta_from_spectra(const std::vector<std::map<mpz_class, int>>& spectra) {
  const int d = static_cast<int>(spectra.size()) - 1;
  RationalFunctionZ out;
  for (int k = 0; k <= d; ++k) {
    auto& side = k % 2 ? out.numerator : out.denominator;
    for (const auto& [lambda, m] : spectra[d - k]) {
      if (lambda != 0) side[lambda] += m;
    }
  }
  return out;
}

RationalFunctionZ zeta_from_matrices(const std::vector<IntegerMatrix>& actions) {
  const int d = static_cast<int>(actions.size()) - 1;
  RationalFunctionZ out;
  for (int k = 0; k <= d; ++k) {
    auto f = det_one_minus_z(actions[d - k]);
    out = out * (k % 2 ? f : f.power(-1));
  }
  return out;
}

std::vector<mpz_class> ZetaSeries::primitive_orbits() const {
  std::vector<mpz_class> out;
  for (int m = 1; m <= static_cast<int>(a.size()); ++m) {
    mpz_class sum = 0;
    for (int d = 1; d <= m; ++d) {
      if (m % d == 0) sum += moebius(m / d) * a[d - 1];
    }
    out.push_back(sum / m);
  }
  return out;
}

ZetaSeries zeta_series(const RationalFunctionZ& zeta, int max_power) {
  if (max_power < 1) throw PreconditionError(kModule, "zeta_series", "max power must be at least 1");
  ZetaSeries out;
  auto num = inverse_root_power_sums(zeta.numerator_residual.coeffs, max_power);
  auto den = inverse_root_power_sums(zeta.denominator_residual.coeffs, max_power);
  for (int m = 1; m <= max_power; ++m) {
    mpz_class a = den[m] - num[m];
    for (const auto& [c, k] : zeta.denominator) {
      mpz_class p;
      mpz_pow_ui(p.get_mpz_t(), c.get_mpz_t(), m);
      a += k * p;
    }
    for (const auto& [c, k] : zeta.numerator) {
      mpz_class p;
      mpz_pow_ui(p.get_mpz_t(), c.get_mpz_t(), m);
      a -= k * p;
    }
    if (a < 0) throw ArithmeticError(kModule, "zeta_series", "negative count a_" + std::to_string(m));
    out.a.push_back(a);
  }
  for (int m = 1; m <= max_power; ++m) {
    mpz_class sum = 0;
    for (int d = 1; d <= m; ++d) {
      if (m % d == 0) sum += moebius(m / d) * out.a[d - 1];
    }
    if (sum < 0 || sum % m != 0) {
      throw ArithmeticError(kModule, "zeta_series", "orbit count of period " + std::to_string(m) + " not a natural number");
    }
  }
  return out;
}

RationalFunctionZ solenoid_2d_zeta() {
  RationalFunctionZ z;
  z.numerator[2] = 2;
  z.denominator[1] = 1;
  z.denominator[4] = 1;
  return z;
}

RationalFunctionZ solenoid_1d_zeta() {
  RationalFunctionZ z;
  z.numerator[1] = 1;
  z.denominator[2] = 1;
  return z;
}

RationalFunctionZ fixed_point_zeta() {
  RationalFunctionZ z;
  z.denominator[1] = 1;
  return z;
}

RationalFunctionZ SolenoidFactorization::reconstruct() const {
  return solenoid_2d_zeta().power(n2d) * solenoid_1d_zeta().power(n1d) * fixed_point_zeta().power(nfp);
}

SolenoidFactorization factor_zeta(const RationalFunctionZ& zeta) {
  auto z = zeta.reduced();
  auto exponent = [&](long c) {
    mpz_class k(c);
    return (z.numerator.count(k) ? z.numerator.at(k) : 0) - (z.denominator.count(k) ? z.denominator.at(k) : 0);
  };
  const int e1 = exponent(1), e2 = exponent(2), e4 = exponent(4);
  const std::string residual = "exponents of (1-z), (1-2z), (1-4z): " + std::to_string(e1) + ", " +
                               std::to_string(e2) + ", " + std::to_string(e4);
  for (const auto* side : {&z.numerator, &z.denominator}) {
    for (const auto& [c, m] : *side) {
      if (c != 1 && c != 2 && c != 4) {
        throw NonSolenoidError(kModule, "factor_zeta", "factor " + factor_string(c, m) + " outside (1-z), (1-2z), (1-4z)");
      }
    }
  }
  if (z.numerator_residual.degree() > 0 || z.denominator_residual.degree() > 0) {
    throw NonSolenoidError(kModule, "factor_zeta", "irreducible residual factor; " + residual);
  }
  SolenoidFactorization f;
  f.n2d = -e4;
  f.n1d = 2 * f.n2d - e2;
  f.nfp = f.n1d - f.n2d - e1;
  if (f.n2d < 0 || f.n1d < 0 || f.nfp < 0) {
    throw NonSolenoidError(kModule, "factor_zeta", "negative multiplicity; " + residual);
  }
  if (!(f.reconstruct() == zeta)) {
    throw CheckFailedError(kModule, "factor_zeta", "reconstruction identity fails");
  }
  return f;
}

DoubledPatch overlap_power(const OverlapRule& r, int tile, int m) {
  if (m < 0) throw PreconditionError(kModule, "overlap_power", "m must be non-negative");
  DoubledPatch cur({0, 0}, 1, 1, {0, 0});
  cur.set(0, 0, tile);
  for (int step = 0; step < m; ++step) {
    int h = cur.width() / 2;
    int h2 = 2 * h + 1;
    DoubledPatch next({-h2, -h2}, 2 * h2 + 1, 2 * h2 + 1, {0, 0});
    for (int y = -h; y <= h; ++y) {
      for (int x = -h; x <= h; ++x) {
        int t = cur.at(x, y);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            int s = r.image(t, dx, dy);
            int have = next.at(2 * x + dx, 2 * y + dy);
            if (have >= 0 && have != s) {
              throw CheckFailedError(kModule, "overlap_power", "overlapping images disagree");
            }
            next.set(2 * x + dx, 2 * y + dy, s);
          }
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

PeriodicPointReport enumerate_periodic_points(const OverlapRule& r, int m) {
  if (m < 1 || m > 12) throw PreconditionError(kModule, "enumerate_periodic_points", "m must lie in 1..12");
  PeriodicPointReport out;
  out.m = m;
  const int n = (1 << m) - 1;
  std::vector<DoubledPatch> images;
  for (int t = 0; t < r.size(); ++t) images.push_back(overlap_power(r, t, m));
  // The fixed point of x -> 2^m x + 2k' on the doubled lattice sits at
  // x0 = 2k / n; c = n c0, with c0 the center of the doubled tile holding x0.
  auto center = [&](int k) {
    if (2 * k == n) throw CheckFailedError(kModule, "enumerate_periodic_points", "fixed point on a tile boundary");
    return 2 * k < n ? 2 * k : 2 * k - 2 * n;
  };
  for (int ky = 0; ky < n; ++ky) {
    for (int kx = 0; kx < n; ++kx) {
      int cx = center(kx), cy = center(ky);
      // Displacement (1 - 2^m) c0 in units of the doubled lattice step 2.
      LatticePoint d{-cx / 2, -cy / 2};
      for (int t = 0; t < r.size(); ++t) {
        const auto& img = images[t];
        if (!img.contains(d.x, d.y)) {
          throw CheckFailedError(kModule, "enumerate_periodic_points", "displacement outside the image");
        }
        if (img.at(d.x, d.y) == t) out.points.push_back({{kx, ky}, t});
      }
    }
  }
  return out;
}

std::string to_string(CenterKind k) {
  switch (k) {
    case CenterKind::supertile_center: return "supertile-center";
    case CenterKind::fault_crossing: return "fault-crossing";
    case CenterKind::fault_row: return "fault-row";
    case CenterKind::undetermined: return "undetermined";
  }
  return "undetermined";
}

FixedPointAccounting classify_fixed_points(const TileSet& tiles, const DoubledCatalog& cat,
                                           const OverlapRule& r, int depth) {
  if (depth < 1) throw PreconditionError(kModule, "classify_fixed_points", "depth must be at least 1");
  FixedPointAccounting out;
  auto fixed = enumerate_periodic_points(r, 1);
  std::set<FaultRowClass> rows, columns;
  for (const auto& fp : fixed.points) {
    FixedPointClass c;
    c.tile = fp.tile;
    Patch u = to_unit(cat, overlap_power(r, fp.tile, depth));
    c.legal = legal(tiles, u);
    const int reach = u.origin().x + u.width() - 1;  // unit patch is symmetric about 0

    const int dirs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    bool free[4];
    for (int i = 0; i < 4; ++i) {
      free[i] = true;
      for (int s = 1; s <= reach; ++s) {
        if (tiles.is_cross(u.at(s * dirs[i][0], s * dirs[i][1]))) free[i] = false;
      }
      c.free_half_lines += free[i];
    }
    c.supertiles = c.free_half_lines >= 2 ? c.free_half_lines : 1;

    // A complete line: every tile carries the same through-line class.
    auto full_line = [&](Axis axis) -> std::optional<FaultRowClass> {
      std::optional<FaultRowClass> cls;
      for (int s = -reach; s <= reach; ++s) {
        int t = axis == Axis::horizontal ? u.at(s, 0) : u.at(0, s);
        auto here = line_class(tiles, t, axis);
        if (!here) return std::nullopt;
        here->example_tile = -1;
        if (cls && *cls != *here) return std::nullopt;
        cls = here;
      }
      return cls;
    };

    const bool center_cross = tiles.is_cross(u.at(0, 0));
    const bool horizontal_free = free[0] && free[2];
    const bool vertical_free = free[1] && free[3];
    if (center_cross) {
      if (c.free_half_lines == 4) c.kind = CenterKind::supertile_center;
    } else {
      c.row = full_line(Axis::horizontal);
      c.column = full_line(Axis::vertical);
      bool through = c.row.has_value() || c.column.has_value();
      if (through && horizontal_free && vertical_free) {
        c.kind = CenterKind::fault_crossing;
      } else if (through && (horizontal_free != vertical_free)) {
        c.kind = CenterKind::fault_row;
      }
    }
    if (c.kind == CenterKind::fault_crossing || c.kind == CenterKind::fault_row) {
      if (c.row) rows.insert(*c.row);
      if (c.column) columns.insert(*c.column);
    }
    if (c.kind == CenterKind::undetermined) ++out.undetermined;
    ++out.per_kind[to_string(c.kind)];
    out.points.push_back(c);
  }
  out.horizontal_classes = static_cast<int>(rows.size());
  out.vertical_classes = static_cast<int>(columns.size());
  auto& p = out.partition;
  p.n2d = out.per_kind.count(to_string(CenterKind::supertile_center)) ? 1 : 0;
  p.n1d = std::max(out.horizontal_classes - 1, 0) + std::max(out.vertical_classes - 1, 0);
  p.nfp = static_cast<int>(out.points.size()) - p.n2d - p.n1d;
  return out;
}

}  // namespace robinson
