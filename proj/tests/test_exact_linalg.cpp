#include "oracles.hpp"

#include "plogit/exact_linalg.hpp"
#include "plogit/random.hpp"
#include "plogit/rational.hpp"
#include "plogit/rational_matrix.hpp"

#include <doctest.h>

using namespace plogit;
namespace la = plogit::linalg;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

RationalMatrix vandermonde(const std::vector<long>& nodes) {
  const std::size_t n = nodes.size();
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = pow(q(nodes[i]), static_cast<unsigned>(j));
  return m;
}

// Pivot rows of a reduced column echelon form, or -1 if the shape is wrong.
std::vector<long> rcef_pivots(const RationalMatrix& b) {
  std::vector<long> piv;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    long row = -1;
    for (std::size_t i = 0; i < b.rows(); ++i)
      if (b(i, j) != 0) {
        row = static_cast<long>(i);
        break;
      }
    if (row < 0 || b(static_cast<std::size_t>(row), j) != 1) return {-1};
    for (std::size_t k = 0; k < b.cols(); ++k)
      if (k != j && b(static_cast<std::size_t>(row), k) != 0) return {-1};
    piv.push_back(row);
  }
  return piv;
}

}  // namespace

TEST_SUITE("rational") {
  TEST_CASE("canonical text form") {
    CHECK(to_string(q(3)) == "3/1");
    CHECK(to_string(q(6, 4)) == "3/2");
    CHECK(to_string(q(-2, 6)) == "-1/3");
    CHECK(parse_rational("3") == q(3));
    CHECK(parse_rational("10/4") == q(5, 2));
    CHECK_THROWS(make_rational(1, 0));
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("x"));
  }

  TEST_CASE("power and conversion") {
    CHECK(pow(q(2, 3), 3) == q(8, 27));
    CHECK(pow(q(5), 0) == q(1));
    CHECK(to_double(q(1, 4)) == doctest::Approx(0.25));
    CHECK(plogit::abs(q(-7, 2)) == q(7, 2));
  }
}

TEST_SUITE("rank") {
  TEST_CASE("small examples") {
    CHECK(la::rank(RationalMatrix::identity(3)) == 3);
    CHECK(la::rank(RationalMatrix{{q(1), q(2)}, {q(2), q(4)}}) == 1);
    CHECK(la::rank(RationalMatrix(3, 4)) == 0);
    CHECK(la::rank(RationalMatrix()) == 0);
  }

  TEST_CASE("Vandermonde at 1..4 has full rank and the product determinant") {
    const auto v = vandermonde({1, 2, 3, 4});
    CHECK(la::rank(v) == 4);
    Rational prod = 1;
    const std::vector<long> x{1, 2, 3, 4};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) prod *= q(x[j] - x[i]);
    CHECK(la::det(v) == prod);
    CHECK(prod == q(12));
  }

  TEST_CASE("agrees with the naive elimination oracle") {
    Rng rng(11);
    std::uniform_int_distribution<std::size_t> dim(1, 7);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t rows = dim(rng), cols = dim(rng);
      const std::size_t r = std::uniform_int_distribution<std::size_t>(0, std::min(rows, cols))(rng);
      auto m = oracle::random_low_rank(rng, rows, cols, r);
      if (trial % 3 == 0) oracle::zero_some_columns(rng, m);
      CAPTURE(trial);
      const auto rk = la::rank(m);
      CHECK(rk == oracle::naive_rank(m));
      CHECK(rk <= r);
      CHECK(rk == la::rank(m.transpose()));
    }
  }
}

TEST_SUITE("nullspace") {
  TEST_CASE("full rank gives an empty basis") {
    const auto n = la::nullspace(RationalMatrix::identity(2));
    CHECK(n.rows() == 2);
    CHECK(n.cols() == 0);
  }

  TEST_CASE("one constraint in two dimensions") {
    const auto n = la::nullspace(RationalMatrix{{q(1), q(1)}});
    REQUIRE(n.cols() == 1);
    CHECK(n(0, 0) == q(1));
    CHECK(n(1, 0) == q(-1));
  }

  TEST_CASE("row 1 2 3 4") {
    const RationalMatrix m{{q(1), q(2), q(3), q(4)}};
    const auto n = la::nullspace(m);
    CHECK(n.cols() == 3);
    CHECK((m * n).is_zero());
    CHECK(la::rank(n) == 3);
  }

  TEST_CASE("random matrices: annihilation, dimension count, canonical shape") {
    Rng rng(23);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t rows = dim(rng), cols = dim(rng);
      const std::size_t r = std::uniform_int_distribution<std::size_t>(0, std::min(rows, cols))(rng);
      auto m = oracle::random_low_rank(rng, rows, cols, r);
      if (trial % 2 == 0) oracle::zero_some_columns(rng, m);
      CAPTURE(trial);
      const auto n = la::nullspace(m);
      CHECK(n.rows() == cols);
      CHECK(cols == la::rank(m) + n.cols());
      CHECK((m * n).is_zero());
      CHECK(la::rank(n) == n.cols());
      CHECK(la::rref_canonicalize(n) == n);
    }
  }
}

TEST_SUITE("rref_canonicalize") {
  TEST_CASE("idempotent and invariant under column recombination") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t rows = 6, r = 1 + trial % 4;
      const auto b = oracle::random_matrix(rng, rows, r);
      if (la::rank(b) != r) continue;
      auto g = oracle::random_matrix(rng, r, r);
      if (la::det(g) == 0) continue;
      const auto c = la::rref_canonicalize(b);
      CHECK(la::rref_canonicalize(c) == c);
      CHECK(la::rref_canonicalize(b * g) == c);
      CHECK(c.cols() == r);
    }
  }

  TEST_CASE("random 6x2 rank 2 has two unit pivots") {
    Rng rng(99);
    RationalMatrix b;
    do {
      b = oracle::random_matrix(rng, 6, 2);
    } while (la::rank(b) != 2);
    const auto c = la::rref_canonicalize(b);
    REQUIRE(c.cols() == 2);
    const auto piv = rcef_pivots(c);
    REQUIRE(piv.size() == 2);
    CHECK(piv[0] >= 0);
    CHECK(piv[0] < piv[1]);
  }

  TEST_CASE("dependent columns collapse") {
    const RationalMatrix b{{q(1), q(2)}, {q(2), q(4)}, {q(3), q(6)}};
    CHECK(la::rref_canonicalize(b).cols() == 1);
  }
}

TEST_SUITE("det") {
  TEST_CASE("small examples") {
    CHECK(la::det(RationalMatrix::identity(4)) == q(1));
    CHECK(la::det(RationalMatrix{{q(1), q(2)}, {q(3), q(4)}}) == q(-2));
    CHECK_THROWS_AS(la::det(RationalMatrix(2, 3)), std::invalid_argument);
  }

  TEST_CASE("agrees with cofactor expansion; nonzero iff full rank") {
    Rng rng(77);
    for (int trial = 0; trial < 150; ++trial) {
      const std::size_t n = 1 + trial % 5;
      const std::size_t r = trial % 4 == 0 ? n - 1 : n;
      auto m = oracle::random_low_rank(rng, n, n, r);
      CAPTURE(trial);
      const auto d = la::det(m);
      CHECK(d == oracle::naive_det(m));
      CHECK((d != 0) == (la::rank(m) == n));
    }
  }
}
