#include "oracles.hpp"

#include "plogit/model.hpp"
#include "plogit/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace plogit;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

ExpParams params(Rational u, std::vector<Rational> c, std::vector<Rational> b) {
  return ExpParams{std::move(u), std::move(c), std::move(b)};
}

ExpParams random_params(Rng& rng, const ModelSpec& spec) {
  ExpParams p;
  p.u = draw_positive_rational(rng, 50);
  for (int l = 0; l < spec.p; ++l) p.c.push_back(draw_positive_rational(rng, 50));
  for (int t = 0; t < spec.T; ++t) p.b.push_back(draw_positive_rational(rng, 50));
  return p;
}

ModelSpec random_spec(Rng& rng, int p, int max_T = 6) {
  const int T = std::uniform_int_distribution<int>(2, max_T)(rng);
  return ModelSpec{p, T, oracle::random_bits(rng, p)};
}

}  // namespace

TEST_SUITE("spec validation") {
  TEST_CASE("bounds") {
    CHECK_NOTHROW(ModelSpec{1, 3, {0}}.validate());
    CHECK_THROWS(ModelSpec{4, 3, {0, 0, 0, 0}}.validate());
    CHECK_THROWS(ModelSpec{1, 1, {0}}.validate());
    CHECK_THROWS(ModelSpec{1, kMaxHorizon + 1, {0}}.validate());
    CHECK_THROWS(ModelSpec{2, 3, {0}}.validate());
    CHECK_THROWS(ModelSpec{1, 3, {2}}.validate());
    CHECK_THROWS(params(q(1), {}, {q(1), q(1)}).validate(ModelSpec{1, 2, {0}}));
    CHECK_THROWS(params(q(-1), {q(2)}, {q(1), q(1)}).validate(ModelSpec{1, 2, {0}}));
  }
}

TEST_SUITE("outcome index") {
  TEST_CASE("examples") {
    CHECK(outcome_index(Outcome({0, 0, 0})) == 1);
    CHECK(outcome_index(Outcome({1, 0, 0})) == 2);
    CHECK(outcome_index(Outcome({1, 1, 1})) == 8);
    CHECK(Outcome::parse("101") == Outcome({1, 0, 1}));
    CHECK(Outcome({1, 0, 1}).to_string() == "101");
    CHECK_THROWS(index_outcome(0, 3));
    CHECK_THROWS(index_outcome(9, 3));
  }

  TEST_CASE("bijection up to T = 10") {
    for (int T = 1; T <= 10; ++T)
      for (std::size_t h = 1; h <= (std::size_t{1} << T); ++h)
        REQUIRE(outcome_index(index_outcome(h, T)) == h);
  }

  TEST_CASE("lags reach into the initial history") {
    const ModelSpec spec{2, 3, {1, 0}};  // y_0 = 1, y_-1 = 0
    const Outcome y({0, 1, 1});
    CHECK(lagged(y, spec, 1, 1) == 1);
    CHECK(lagged(y, spec, 1, 2) == 0);
    CHECK(lagged(y, spec, 2, 2) == 1);
    CHECK(lagged(y, spec, 3, 1) == 1);
  }
}

TEST_SUITE("probabilities") {
  TEST_CASE("AR(1) examples") {
    const ModelSpec spec{1, 2, {0}};
    const auto zero = params(q(1), {q(1)}, {q(1), q(1)});
    for (std::size_t h = 1; h <= 4; ++h) CHECK(prob_ar1(index_outcome(h, 2), spec, zero) == q(1, 4));
    const auto c2 = params(q(1), {q(2)}, {q(1), q(1)});
    CHECK(prob_ar1(Outcome({1, 0}), spec, c2) == q(1, 6));
    CHECK(prob_ar1(Outcome({1, 1}), spec, c2) == q(1, 3));
  }

  TEST_CASE("AR(2) examples") {
    const ModelSpec flat{2, 3, {0, 0}};
    const auto ones = params(q(1), {q(1), q(1)}, {q(1), q(1), q(1)});
    for (std::size_t h = 1; h <= 8; ++h) CHECK(prob_ar2(index_outcome(h, 3), flat, ones) == q(1, 8));
    const ModelSpec spec{2, 3, {1, 1}};
    const auto pr = params(q(1), {q(2), q(3)}, {q(1), q(1), q(1)});
    CHECK(prob_ar2(Outcome({0, 0, 0}), spec, pr) == q(1, 56));
    Rational total = 0;
    for (std::size_t h = 1; h <= 8; ++h) total += prob_ar2(index_outcome(h, 3), spec, pr);
    CHECK(total == 1);
  }

  TEST_CASE("static model") {
    const ModelSpec spec{0, 2, {}};
    const auto pr = params(q(1), {}, {q(1), q(1)});
    for (std::size_t h = 1; h <= 4; ++h) CHECK(prob_general(index_outcome(h, 2), spec, pr) == q(1, 4));
  }

  TEST_CASE("general form matches the AR(1) and AR(2) forms and the direct oracle") {
    Rng rng(3);
    for (int p = 1; p <= 2; ++p) {
      for (int trial = 0; trial < 100; ++trial) {
        const auto spec = random_spec(rng, p, 5);
        const auto pr = random_params(rng, spec);
        const auto y = index_outcome(
            std::uniform_int_distribution<std::size_t>(1, spec.outcome_count())(rng), spec.T);
        const Rational g = prob_general(y, spec, pr);
        CHECK(g == (p == 1 ? prob_ar1(y, spec, pr) : prob_ar2(y, spec, pr)));
        CHECK(g == oracle::naive_prob(y.bits(), spec.init, pr.u, pr.c, pr.b));
      }
    }
  }

  TEST_CASE("normalization and positivity for p = 0..3") {
    Rng rng(8);
    for (int p = 0; p <= 3; ++p) {
      for (int trial = 0; trial < 20; ++trial) {
        const auto spec = random_spec(rng, p, 6);
        const auto pr = random_params(rng, spec);
        Rational total = 0;
        for (std::size_t h = 1; h <= spec.outcome_count(); ++h) {
          const auto v = prob_general(index_outcome(h, spec.T), spec, pr);
          CHECK(v > 0);
          CHECK(v < 1);
          total += v;
        }
        CHECK(total == 1);
      }
    }
  }

  TEST_CASE("all-ones probability increases with u") {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
      const auto spec = random_spec(rng, 1 + trial % 3, 5);
      auto pr = random_params(rng, spec);
      const Outcome ones(std::vector<int>(static_cast<std::size_t>(spec.T), 1));
      const auto before = prob_general(ones, spec, pr);
      pr.u *= q(3, 2);
      CHECK(prob_general(ones, spec, pr) > before);
    }
  }

  TEST_CASE("floating-point probability matches the exact value") {
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
      const int p = trial % 3;
      const auto spec = random_spec(rng, p, 5);
      const auto pr = random_params(rng, spec);
      std::vector<double> gamma, x;
      for (const auto& c : pr.c) gamma.push_back(std::log(to_double(c)));
      for (const auto& b : pr.b) x.push_back(std::log(to_double(b)));
      const double alpha = std::log(to_double(pr.u));
      for (std::size_t h = 1; h <= spec.outcome_count(); ++h) {
        const auto y = index_outcome(h, spec.T);
        const double exact = to_double(prob_general(y, spec, pr));
        CHECK(prob_float(y, spec, alpha, gamma, x) == doctest::Approx(exact).epsilon(1e-12));
      }
    }
  }
}

TEST_SUITE("random draws") {
  TEST_CASE("seed derivation is deterministic and tag-sensitive") {
    CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
  }

  TEST_CASE("bounded positive rationals, distinct draws, nondegenerate lags") {
    Rng rng(1);
    for (int k = 0; k < 200; ++k) {
      const auto r = draw_positive_rational(rng);
      CHECK(r > 0);
      CHECK(abs(r.get_num()) <= kDrawBound);
      CHECK(r.get_den() <= kDrawBound);
    }
    const std::vector<Rational> exclude{q(1), q(2)};
    const auto d = draw_distinct(rng, 50, exclude);
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(d[i] != 1);
      CHECK(d[i] != 2);
      for (std::size_t j = i + 1; j < d.size(); ++j) CHECK(d[i] != d[j]);
    }
    for (int k = 0; k < 100; ++k) {
      const auto c = draw_lag_coefficients(rng, 3);
      for (unsigned mask = 1; mask < 8; ++mask) {
        Rational prod = 1;
        for (int l = 0; l < 3; ++l)
          if (mask >> l & 1) prod *= c[static_cast<std::size_t>(l)];
        CHECK(prod != 1);
      }
    }
  }
}
