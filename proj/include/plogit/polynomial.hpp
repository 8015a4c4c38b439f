#pragma once

#include "plogit/certificate.hpp"
#include "plogit/model.hpp"
#include "plogit/rational_matrix.hpp"

#include <span>
#include <vector>

namespace plogit {

/// Univariate polynomial in u with exact coefficients; coefficients()[k]
/// multiplies u^k. Trailing zeros are always trimmed.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coefficients);

  static RationalPoly constant(const Rational& value);
  /// a0 + a1 u
  static RationalPoly linear(const Rational& a0, const Rational& a1);
  static RationalPoly monomial(const Rational& coefficient, unsigned power);

  const std::vector<Rational>& coefficients() const { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  Rational evaluate(const Rational& u) const;
  RationalPoly pow(unsigned exponent) const;

  friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend bool operator==(const RationalPoly&, const RationalPoly&) = default;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

enum class PolyRoute {
  /// Columns of P-double-dot (p = 1, 2; b = 1).
  pddot,
  /// P-bar rows multiplied by prod_k (1 + k u)^T over the distinct lag
  /// multipliers k = prod_{l in S} c_l (any p; b = 1).
  cleared_pbar,
};

/// Column h of P-double-dot as a polynomial in u, by symbolic expansion of
/// its factors. Throws std::invalid_argument unless p is 1 or 2.
RationalPoly column_poly(const ModelSpec& spec, std::size_t h, std::span<const Rational> c);

/// Column h of the denominator-cleared P-bar.
RationalPoly cleared_pbar_poly(const ModelSpec& spec, std::size_t h, std::span<const Rational> c);

/// The row factor prod_k (1 + k u)^T that turns P-bar into cleared_pbar_poly.
Rational cleared_pbar_row_factor(const ModelSpec& spec, std::span<const Rational> c,
                                 const Rational& u);

std::vector<RationalPoly> column_polys(const ModelSpec& spec, std::span<const Rational> c,
                                       PolyRoute route);

/// (max degree + 1) x n matrix; column j holds the coefficients of polys[j].
RationalMatrix coefficient_matrix(std::span<const RationalPoly> polys);

/// Rank of the span over u of the chosen matrix family, as the exact rank of
/// its coefficient matrix (evaluation at distinct points is an invertible
/// Vandermonde transform once enough points are used).
RankCertificate coeff_matrix_rank(const ModelSpec& spec, std::span<const Rational> c,
                                  PolyRoute route = PolyRoute::pddot);

}  // namespace plogit
