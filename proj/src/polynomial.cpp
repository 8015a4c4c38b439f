#include "plogit/polynomial.hpp"

#include "plogit/exact_linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace plogit {

std::string_view to_string(RankMethod method) {
  return method == RankMethod::polynomial_exact ? "polynomial_exact" : "sampled_lower_bound";
}

RationalPoly::RationalPoly(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  trim();
}

RationalPoly RationalPoly::constant(const Rational& value) { return RationalPoly({value}); }

RationalPoly RationalPoly::linear(const Rational& a0, const Rational& a1) {
  return RationalPoly({a0, a1});
}

RationalPoly RationalPoly::monomial(const Rational& coefficient, unsigned power) {
  std::vector<Rational> c(power + 1);
  c[power] = coefficient;
  return RationalPoly(std::move(c));
}

void RationalPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational RationalPoly::evaluate(const Rational& u) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + *it;
  return acc;
}

RationalPoly RationalPoly::pow(unsigned exponent) const {
  RationalPoly result = constant(1);
  RationalPoly base = *this;
  while (exponent) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent) base = base * base;
  }
  return result;
}

RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return RationalPoly(std::move(c));
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return RationalPoly(std::move(c));
}

namespace {

unsigned checked_exponent(int e) {
  if (e < 0) throw std::logic_error("P-double-dot column is not a polynomial (negative power)");
  return static_cast<unsigned>(e);
}

// Distinct values prod_{l in S} c_l over all subsets S of the lags.
std::vector<Rational> lag_multipliers(std::span<const Rational> c) {
  std::vector<Rational> ks;
  for (unsigned mask = 0; mask < (1U << c.size()); ++mask) {
    Rational k(1);
    for (std::size_t l = 0; l < c.size(); ++l)
      if (mask & (1U << l)) k *= c[l];
    if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
  }
  return ks;
}

void check_route_args(const ModelSpec& spec, std::span<const Rational> c, std::size_t h) {
  spec.validate();
  if (c.size() != static_cast<std::size_t>(spec.p))
    throw std::invalid_argument("c must have length p");
  if (h < 1 || h > spec.outcome_count()) throw std::out_of_range("outcome index out of range");
}

}  // namespace

RationalPoly column_poly(const ModelSpec& spec, std::size_t h, std::span<const Rational> c) {
  check_route_args(spec, c, h);
  const Outcome y = index_outcome(h, spec.T);
  const int T = spec.T;
  const RationalPoly one_plus_u = RationalPoly::linear(1, 1);
  const RationalPoly u_pow = RationalPoly::monomial(1, static_cast<unsigned>(y.sum()));

  if (spec.p == 1) {
    int n = 0;
    for (int t = 1; t < T; ++t) n += y.y(t);
    return u_pow * one_plus_u.pow(static_cast<unsigned>(n)) *
           RationalPoly::linear(1, c[0]).pow(checked_exponent(T - 1 - n));
  }
  if (spec.p == 2) {
    const bool y0 = spec.init[0] == 1;
    const int e1 = y0 ? (T - 1) / 2 : T / 2;
    const int e2 = y0 ? (T - 2) / 2 : (T - 1) / 2;
    const int e12 = y0 ? T - 1 : T - 2;
    auto yy = [&](int t) { return t >= 1 ? y.y(t) : spec.init[0]; };
    int n1 = 0, nc1 = 0, nc2 = 0, nc12 = 0;
    for (int t = 2; t <= T - 1; ++t) {
      if (!yy(t - 1)) continue;
      if (yy(t - 2)) {
        n1 += 1;
        nc12 += 1;
      } else {
        n1 += 2;
        nc1 += 1;
        nc2 += 1;
      }
    }
    if (yy(T - 1)) {
      n1 += 1;
      (yy(T - 2) ? nc12 : nc1) += 1;
    }
    return u_pow * one_plus_u.pow(static_cast<unsigned>(n1)) *
           RationalPoly::linear(1, c[0]).pow(checked_exponent(e1 - nc1)) *
           RationalPoly::linear(1, c[1]).pow(checked_exponent(e2 - nc2)) *
           RationalPoly::linear(1, c[0] * c[1]).pow(checked_exponent(e12 - nc12));
  }
  throw std::invalid_argument("P-double-dot polynomials exist for p = 1 and p = 2 only");
}

RationalPoly cleared_pbar_poly(const ModelSpec& spec, std::size_t h, std::span<const Rational> c) {
  check_route_args(spec, c, h);
  const Outcome y = index_outcome(h, spec.T);
  const auto ks = lag_multipliers(c);
  std::vector<int> count(ks.size(), 0);
  Rational lead(1);
  for (int t = 1; t <= spec.T; ++t) {
    Rational m(1);
    for (int l = 1; l <= spec.p; ++l)
      if (lagged(y, spec, t, l)) m *= c[static_cast<std::size_t>(l - 1)];
    const auto pos = static_cast<std::size_t>(std::find(ks.begin(), ks.end(), m) - ks.begin());
    ++count[pos];
    if (y.y(t)) lead *= m;
  }
  RationalPoly poly = RationalPoly::monomial(lead, static_cast<unsigned>(y.sum()));
  for (std::size_t k = 0; k < ks.size(); ++k)
    poly = poly * RationalPoly::linear(1, ks[k]).pow(static_cast<unsigned>(spec.T - count[k]));
  return poly;
}

Rational cleared_pbar_row_factor(const ModelSpec& spec, std::span<const Rational> c,
                                 const Rational& u) {
  Rational f(1);
  for (const auto& k : lag_multipliers(c)) f *= pow(Rational(1 + k * u), static_cast<unsigned>(spec.T));
  return f;
}

std::vector<RationalPoly> column_polys(const ModelSpec& spec, std::span<const Rational> c,
                                       PolyRoute route) {
  std::vector<RationalPoly> polys;
  polys.reserve(spec.outcome_count());
  for (std::size_t h = 1; h <= spec.outcome_count(); ++h)
    polys.push_back(route == PolyRoute::pddot ? column_poly(spec, h, c)
                                              : cleared_pbar_poly(spec, h, c));
  return polys;
}

RationalMatrix coefficient_matrix(std::span<const RationalPoly> polys) {
  int max_degree = -1;
  for (const auto& p : polys) max_degree = std::max(max_degree, p.degree());
  RationalMatrix m(static_cast<std::size_t>(max_degree + 1), polys.size());
  for (std::size_t j = 0; j < polys.size(); ++j) {
    const auto& coeffs = polys[j].coefficients();
    for (std::size_t k = 0; k < coeffs.size(); ++k) m(k, j) = coeffs[k];
  }
  return m;
}

RankCertificate coeff_matrix_rank(const ModelSpec& spec, std::span<const Rational> c,
                                  PolyRoute route) {
  const auto polys = column_polys(spec, c, route);
  RankCertificate cert;
  cert.method = RankMethod::polynomial_exact;
  cert.claimed_rank = linalg::rank(coefficient_matrix(polys));
  return cert;
}

}  // namespace plogit
