#include "oracles.hpp"

#include "plogit/builders.hpp"
#include "plogit/exact_linalg.hpp"
#include "plogit/moment_space.hpp"

#include <doctest.h>

using namespace plogit;
namespace la = plogit::linalg;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

std::vector<Rational> ones(int T) { return std::vector<Rational>(static_cast<std::size_t>(T), q(1)); }

std::size_t pow2(int T) { return std::size_t{1} << T; }

}  // namespace

TEST_SUITE("span rank") {
  TEST_CASE("examples") {
    Rng rng(1);
    CHECK(span_rank(ModelSpec{1, 3, {0}}, draw_lag_coefficients(rng, 1), ones(3), {}, 1).claimed_rank == 6);
    for (int y0 : {0, 1})
      CHECK(span_rank(ModelSpec{2, 4, {y0, 1}}, draw_lag_coefficients(rng, 2), ones(4), {}, 2)
                .claimed_rank == 10);
    CHECK(span_rank(ModelSpec{0, 3, {}}, {}, ones(3), {}, 3).claimed_rank == 4);
  }

  TEST_CASE("certificate method follows the covariate regime") {
    Rng rng(2);
    const auto c = draw_lag_coefficients(rng, 1);
    const auto exact = span_rank(ModelSpec{1, 4, {1}}, c, ones(4), {}, 5);
    CHECK(exact.method == RankMethod::polynomial_exact);
    const auto b = draw_distinct(rng, 4);
    RankBudget budget;
    budget.trials = 4;
    const auto sampled = span_rank(ModelSpec{1, 4, {1}}, c, b, budget, 5);
    CHECK(sampled.method == RankMethod::sampled_lower_bound);
    CHECK(sampled.seeds.size() == 4);
    CHECK(sampled.trial_ranks.size() == 4);
    CHECK(sampled.stable_across_trials);
    CHECK(sampled.claimed_rank == 8);
  }

  TEST_CASE("invariant to seed, extra rows and full row count") {
    Rng rng(3);
    for (int T = 3; T <= 6; ++T) {
      const ModelSpec spec{1, T, {0}};
      const auto c = draw_lag_coefficients(rng, 1);
      const auto b = draw_distinct(rng, static_cast<std::size_t>(T));
      const auto base = span_rank(spec, c, b, {}, 100).claimed_rank;
      for (std::uint64_t seed : {7ULL, 8ULL, 9ULL}) CHECK(span_rank(spec, c, b, {}, seed).claimed_rank == base);
      RankBudget more;
      more.rows = base + 9;
      CHECK(span_rank(spec, c, b, more, 10).claimed_rank == base);
      RankBudget full;
      full.full_rows = true;
      CHECK(span_rank(spec, c, b, full, 11).claimed_rank == base);
    }
  }

  TEST_CASE("invariant to rescaling every alpha draw") {
    Rng rng(4);
    for (int T = 3; T <= 5; ++T) {
      const ModelSpec spec{1, T, {1}};
      const auto c = draw_lag_coefficients(rng, 1);
      const auto b = draw_distinct(rng, static_cast<std::size_t>(T));
      auto d = draw_alpha(static_cast<std::size_t>(2 * T + 3), 50 + T);
      const auto r0 = la::rank(build_pbar(spec, c, b, d).matrix);
      for (auto& u : d.u) u *= q(13, 5);
      CHECK(la::rank(build_pbar(spec, c, b, d).matrix) == r0);
      CHECK(r0 == static_cast<std::size_t>(2 * T));
    }
  }

  TEST_CASE("budget too small is rejected") {
    RankBudget tiny;
    tiny.rows = 3;
    CHECK_THROWS_AS(span_rank(ModelSpec{1, 4, {0}}, std::vector<Rational>{q(2)},
                              std::vector<Rational>{q(2), q(3), q(5), q(7)}, tiny, 1),
                    std::invalid_argument);
    RankBudget none;
    none.trials = 0;
    CHECK_THROWS(span_rank(ModelSpec{1, 4, {0}}, std::vector<Rational>{q(2)},
                           std::vector<Rational>{q(2), q(3), q(5), q(7)}, none, 1));
  }

  TEST_CASE("expected ranks") {
    CHECK(expected_span_rank(ModelSpec{0, 4, {}}, CovariateRegime::none) == 5u);
    CHECK(expected_span_rank(ModelSpec{1, 2, {0}}, CovariateRegime::generic) == 4u);
    CHECK(expected_span_rank(ModelSpec{1, 5, {0}}, CovariateRegime::generic) == 10u);
    CHECK(expected_span_rank(ModelSpec{2, 4, {0, 0}}, CovariateRegime::none) == 10u);
    CHECK(expected_span_rank(ModelSpec{2, 4, {0, 0}}, CovariateRegime::generic) == 12u);
    CHECK_FALSE(expected_span_rank(ModelSpec{2, 4, {0, 0}}, CovariateRegime::pattern).has_value());
    CHECK_FALSE(expected_span_rank(ModelSpec{3, 4, {0, 0, 0}}, CovariateRegime::generic).has_value());
  }
}

TEST_SUITE("moment basis") {
  TEST_CASE("dimension examples") {
    CHECK(moment_basis(ModelSpec{1, 2, {0}}, std::vector<Rational>{q(2)}, ones(2), {}, 1).d == 0);
    const auto b3 = moment_basis(ModelSpec{1, 3, {0}}, std::vector<Rational>{q(2)}, ones(3), {}, 1);
    CHECK(b3.d == 2);
    CHECK(b3.basis.rows() == 8);
    CHECK(b3.basis.cols() == 2);
    Rng rng(5);
    CHECK(moment_basis(ModelSpec{2, 3, {0, 0}}, draw_lag_coefficients(rng, 2), ones(3), {}, 2).d == 1);
  }

  TEST_CASE("basis is canonical, annihilated by its construction rows, and reproducible") {
    Rng rng(6);
    for (int T = 3; T <= 5; ++T) {
      const ModelSpec spec{1, T, {1}};
      const auto c = draw_lag_coefficients(rng, 1);
      const auto b = draw_distinct(rng, static_cast<std::size_t>(T));
      const auto mb = moment_basis(spec, c, b, {}, 60 + T);
      CHECK(mb.d + mb.certificate.claimed_rank == pow2(T));
      CHECK(la::rref_canonicalize(mb.basis) == mb.basis);
      CHECK((build_pbar(spec, c, b, mb.construction_draws).matrix * mb.basis).is_zero());
      CHECK(moment_basis(spec, c, b, {}, 60 + T).basis == mb.basis);
    }
  }

  TEST_CASE("fresh-draw validation") {
    const auto empty = moment_basis(ModelSpec{1, 2, {0}}, std::vector<Rational>{q(2)}, ones(2), {}, 1);
    CHECK(validate_basis(empty, 10, 2).valid);

    const auto mb = moment_basis(ModelSpec{1, 3, {0}}, std::vector<Rational>{q(3, 2)}, ones(3), {}, 3);
    const auto v = validate_basis(mb, 50, 4);
    CHECK(v.valid);
    CHECK(v.n_fresh == 50);
    CHECK(v.max_abs_violation == 0);
    CHECK(v.columns_independent);
    CHECK_FALSE(v.offending_u.has_value());

    auto corrupted = mb;
    corrupted.basis(3, 1) += q(1, 7);
    const auto bad = validate_basis(corrupted, 50, 4);
    CHECK_FALSE(bad.valid);
    CHECK(bad.max_abs_violation > 0);
    CHECK(bad.offending_u.has_value());
    CHECK(bad.offending_column == std::optional<std::size_t>{1});

    auto dependent = mb;
    for (std::size_t i = 0; i < 8; ++i) dependent.basis(i, 1) = 2 * dependent.basis(i, 0);
    CHECK_FALSE(validate_basis(dependent, 5, 4).columns_independent);
    CHECK_THROWS(validate_basis(mb, 0, 4));
  }
}

TEST_SUITE("dimension report") {
  TEST_CASE("examples and the rank-nullity identity") {
    const std::vector<DimensionCell> cells{
        {1, 4, {0}, CovariateDesign::beta0()},
        {2, 5, {0, 0}, CovariateDesign::beta0()},
        {2, 4, {1, 0}, CovariateDesign::generic()},
        {0, 2, {}, CovariateDesign::beta0()},
        {3, 4, {0, 0, 0}, CovariateDesign::generic()},
    };
    const auto rep = dimension_report(cells, 9);
    REQUIRE(rep.rows.size() == 5);
    CHECK(rep.rows[0].dim == 8);
    CHECK(rep.rows[1].dim == 19);
    CHECK(rep.rows[2].dim == 4);
    CHECK(rep.rows[3].dim == 1);
    CHECK_FALSE(rep.rows[4].asserted);
    CHECK(rep.rows[4].expected == std::optional<std::size_t>{0});
    for (const auto& row : rep.rows) {
      CHECK(row.dim + row.rank == pow2(row.cell.T));
      if (row.asserted) CHECK(row.match);
    }
    CHECK(rep.passed());
  }

  TEST_CASE("deterministic in the seed; dimension independent of it") {
    const std::vector<DimensionCell> cells{{1, 5, {1}, CovariateDesign::generic()}};
    const auto a = dimension_report(cells, 1);
    const auto b = dimension_report(cells, 1);
    const auto c = dimension_report(cells, 2);
    CHECK(a.rows[0].c == b.rows[0].c);
    CHECK(a.rows[0].certificate.seeds == b.rows[0].certificate.seeds);
    CHECK(a.rows[0].dim == c.rows[0].dim);
  }

  TEST_CASE("AR(1): covariates do not change the dimension") {
    for (int T = 2; T <= 6; ++T) {
      const std::vector<DimensionCell> cells{{1, T, {0}, CovariateDesign::beta0()},
                                             {1, T, {0}, CovariateDesign::generic()}};
      const auto rep = dimension_report(cells, 13);
      CHECK(rep.rows[0].dim == rep.rows[1].dim);
      CHECK(rep.rows[0].dim == pow2(T) - static_cast<std::size_t>(2 * T));
    }
  }

  TEST_CASE("empty grid") {
    const auto rep = dimension_report({}, 1);
    CHECK(rep.rows.empty());
    CHECK(rep.passed());
  }

  TEST_CASE("default grid shape") {
    const auto grid = default_dimension_grid();
    std::size_t p3 = 0;
    for (const auto& cell : grid) {
      if (cell.p == 3) ++p3;
      CHECK_NOTHROW(ModelSpec({cell.p, cell.T, cell.init}).validate());
    }
    CHECK(p3 == 2);
  }
}

TEST_SUITE("covariate designs") {
  TEST_CASE("labels and draws") {
    Rng rng(3);
    CHECK(CovariateDesign::beta0().label() == "beta0");
    CHECK(CovariateDesign::generic().label() == "generic");
    const auto pat = CovariateDesign::equal_from(4, 2);
    CHECK(pat.label() == "x2=x3=x4");
    const auto b = pat.draw_b(4, rng);
    CHECK(b[1] == b[2]);
    CHECK(b[2] == b[3]);
    CHECK(b[0] != b[1]);
    CHECK(CovariateDesign::beta0().draw_b(3, rng) == ones(3));
    const auto g = CovariateDesign::generic().draw_b(5, rng);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j) CHECK(g[i] != g[j]);
  }

  TEST_CASE("pattern surplus") {
    const auto t3 = covariate_pattern_experiment(3, {0, 0}, 1);
    CHECK(t3.pattern_dim == 1);
    CHECK(t3.generic_dim == 0);
    CHECK(t3.surplus == 1);
    CHECK(t3.passed);
    const auto t4 = covariate_pattern_experiment(4, {1, 0}, 2);
    CHECK(t4.surplus >= 2);
    CHECK(t4.passed);
    CHECK_THROWS(covariate_pattern_experiment(6, {0, 0}, 1));
  }

  TEST_CASE("stacked covariate vectors") {
    const auto two = stacked_x_rank(3, 2, 5);
    CHECK(two.single_ranks == std::vector<std::size_t>{6, 6});
    CHECK(two.stacked_rank >= 7);
    const auto same = stacked_x_rank(3, 2, 5, true);
    CHECK(same.stacked_rank == 6);
    CHECK_THROWS(stacked_x_rank(3, 1, 5));
  }
}
