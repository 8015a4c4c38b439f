#include "oracles.hpp"

#include "plogit/builders.hpp"
#include "plogit/exact_linalg.hpp"
#include "plogit/polynomial.hpp"

#include <doctest.h>

#include <set>

using namespace plogit;
namespace la = plogit::linalg;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

std::vector<Rational> ones(int T) { return std::vector<Rational>(static_cast<std::size_t>(T), q(1)); }

std::vector<Rational> coeffs(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.push_back(q(x));
  return out;
}

}  // namespace

TEST_SUITE("RationalPoly") {
  TEST_CASE("arithmetic") {
    const auto one_plus_u = RationalPoly::linear(q(1), q(1));
    CHECK(one_plus_u.pow(3).coefficients() == coeffs({1, 3, 3, 1}));
    CHECK(RationalPoly().degree() == -1);
    CHECK(RationalPoly(coeffs({0, 0})).is_zero());
    CHECK(RationalPoly::monomial(q(2), 3).degree() == 3);
    const auto p = one_plus_u * RationalPoly::monomial(q(1), 1) + RationalPoly::constant(q(-1));
    CHECK(p.coefficients() == coeffs({-1, 1, 1}));
    CHECK(p.evaluate(q(2)) == q(5));
    CHECK((p + RationalPoly(coeffs({1, -1, -1}))).is_zero());
  }

  TEST_CASE("product evaluates to the product of values") {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Rational> a, b;
      for (int k = 0; k < 1 + trial % 5; ++k) a.push_back(oracle::small_rational(rng));
      for (int k = 0; k < 1 + trial % 3; ++k) b.push_back(oracle::small_rational(rng));
      const RationalPoly pa(a), pb(b);
      const Rational u = oracle::small_rational(rng);
      CHECK((pa * pb).evaluate(u) == pa.evaluate(u) * pb.evaluate(u));
      CHECK((pa + pb).evaluate(u) == pa.evaluate(u) + pb.evaluate(u));
    }
  }
}

TEST_SUITE("column polynomials") {
  TEST_CASE("AR(1), T = 2, c = 2 examples") {
    const ModelSpec spec{1, 2, {0}};
    const std::vector<Rational> c{q(2)};
    CHECK(column_poly(spec, outcome_index(Outcome({0, 0})), c).coefficients() == coeffs({1, 2}));
    CHECK(column_poly(spec, outcome_index(Outcome({1, 1})), c).coefficients() == coeffs({0, 0, 1, 1}));
  }

  TEST_CASE("evaluation matches Pddot entries") {
    Rng rng(7);
    for (int p = 1; p <= 2; ++p) {
      for (int T = p + 1; T <= 5; ++T) {
        for (int trial = 0; trial < 2; ++trial) {
          const ModelSpec spec{p, T, oracle::random_bits(rng, p)};
          const auto c = draw_lag_coefficients(rng, p);
          const auto d = draw_alpha(4, 10 * T + trial);
          const auto m = build_pddot(spec, d, c, ones(T));
          const auto polys = column_polys(spec, c, PolyRoute::pddot);
          for (std::size_t h = 0; h < polys.size(); ++h)
            for (std::size_t g = 0; g < d.size(); ++g) CHECK(polys[h].evaluate(d.u[g]) == m.matrix(g, h));
        }
      }
    }
  }

  TEST_CASE("cleared Pbar route evaluates to Pbar times the row factor") {
    Rng rng(8);
    for (int p = 0; p <= 3; ++p) {
      const int T = std::max(3, p + 1);
      const ModelSpec spec{p, T, oracle::random_bits(rng, p)};
      const auto c = draw_lag_coefficients(rng, p);
      const auto d = draw_alpha(3, 20 + p);
      const auto pbar = build_pbar(spec, c, ones(T), d);
      const auto polys = column_polys(spec, c, PolyRoute::cleared_pbar);
      for (std::size_t g = 0; g < d.size(); ++g) {
        const Rational f = cleared_pbar_row_factor(spec, c, d.u[g]);
        for (std::size_t h = 0; h < polys.size(); ++h)
          CHECK(polys[h].evaluate(d.u[g]) == pbar.matrix(g, h) * f);
      }
    }
  }

  TEST_CASE("degree bounds, attained by the all-ones column, every power present") {
    Rng rng(9);
    for (int p = 1; p <= 2; ++p) {
      for (int T = p + 1; T <= (p == 1 ? 7 : 5); ++T) {
        for (int y0 : {0, 1}) {
          std::vector<int> init(static_cast<std::size_t>(p), 0);
          init[0] = y0;
          const ModelSpec spec{p, T, init};
          const auto c = draw_lag_coefficients(rng, p);
          const auto polys = column_polys(spec, c, PolyRoute::pddot);
          const int bound = p == 1 ? 2 * T - 1 : 3 * (T - 1);
          int max_deg = -1;
          std::set<int> powers;
          for (const auto& poly : polys) {
            max_deg = std::max(max_deg, poly.degree());
            for (std::size_t k = 0; k < poly.coefficients().size(); ++k)
              if (poly.coefficients()[k] != 0) powers.insert(static_cast<int>(k));
          }
          CAPTURE(p);
          CAPTURE(T);
          CHECK(max_deg == bound);
          CHECK(polys.back().degree() == bound);
          CHECK(static_cast<int>(powers.size()) == bound + 1);
        }
      }
    }
  }

  TEST_CASE("AR(1) coefficient matrix at T = 2 has determinant c - 1") {
    for (long n : {2L, 3L, 7L}) {
      const std::vector<Rational> c{q(n, 3)};
      const auto polys = column_polys(ModelSpec{1, 2, {0}}, c, PolyRoute::pddot);
      CHECK(la::det(coefficient_matrix(polys)) == c[0] - 1);
    }
  }
}

TEST_SUITE("coefficient rank") {
  TEST_CASE("AR(1), T = 2") {
    CHECK(coeff_matrix_rank(ModelSpec{1, 2, {0}}, std::vector<Rational>{q(2)}).claimed_rank == 4);
    CHECK(coeff_matrix_rank(ModelSpec{1, 2, {0}}, std::vector<Rational>{q(1)}).claimed_rank == 3);
  }

  TEST_CASE("AR(1): 2T; AR(2): 3T - 2 for both y0 variants") {
    Rng rng(10);
    for (int T = 2; T <= 7; ++T) {
      const auto cert = coeff_matrix_rank(ModelSpec{1, T, {0}}, draw_lag_coefficients(rng, 1));
      CHECK(cert.claimed_rank == static_cast<std::size_t>(2 * T));
      CHECK(cert.method == RankMethod::polynomial_exact);
    }
    for (int T = 3; T <= 5; ++T)
      for (int y0 : {0, 1})
        CHECK(coeff_matrix_rank(ModelSpec{2, T, {y0, 0}}, draw_lag_coefficients(rng, 2)).claimed_rank ==
              static_cast<std::size_t>(3 * T - 2));
  }

  TEST_CASE("matches the sampled rank of Pddot") {
    Rng rng(11);
    for (int p = 1; p <= 2; ++p) {
      for (int T = p + 1; T <= (p == 1 ? 7 : 5); ++T) {
        const ModelSpec spec{p, T, oracle::random_bits(rng, p)};
        const auto c = draw_lag_coefficients(rng, p);
        const auto exact = coeff_matrix_rank(spec, c).claimed_rank;
        const auto d = draw_alpha(exact + 2, 40 + T);
        CHECK(la::rank(build_pddot(spec, d, c, ones(T)).matrix) == exact);
      }
    }
  }

  TEST_CASE("cleared route agrees with the Pddot route") {
    Rng rng(12);
    for (int T = 3; T <= 5; ++T) {
      for (int p = 1; p <= 2; ++p) {
        const ModelSpec spec{p, T, oracle::random_bits(rng, p)};
        const auto c = draw_lag_coefficients(rng, p);
        CHECK(coeff_matrix_rank(spec, c, PolyRoute::cleared_pbar).claimed_rank ==
              coeff_matrix_rank(spec, c, PolyRoute::pddot).claimed_rank);
      }
    }
  }

  TEST_CASE("Pddot route needs p in {1, 2}") {
    CHECK_THROWS(column_poly(ModelSpec{3, 4, {0, 0, 0}}, 1, std::vector<Rational>{q(2), q(3), q(5)}));
  }
}
