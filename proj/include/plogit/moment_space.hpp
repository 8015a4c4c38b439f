#pragma once

#include "plogit/builders.hpp"
#include "plogit/certificate.hpp"
#include "plogit/model.hpp"
#include "plogit/random.hpp"
#include "plogit/rational_matrix.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace plogit {

enum class CovariateRegime {
  none,     // beta = 0: b_t = 1 exactly
  generic,  // b_t drawn i.i.d. and pairwise distinct
  pattern,  // equalities among the b_t given by group labels
};

std::string_view to_string(CovariateRegime regime);

/// How the covariate indices b_t = e^{x_t' beta} are chosen for a cell.
struct CovariateDesign {
  CovariateRegime regime = CovariateRegime::none;
  /// For pattern designs: one label per period; equal labels share a b value.
  std::vector<int> groups;

  static CovariateDesign beta0() { return {}; }
  static CovariateDesign generic() { return {CovariateRegime::generic, {}}; }
  /// b_first = ... = b_T, earlier periods generic.
  static CovariateDesign equal_from(int T, int first);

  /// "beta0", "generic" or e.g. "x2=x3=x4".
  std::string label() const;
  std::vector<Rational> draw_b(int T, Rng& rng) const;
};

/// Span rank the theory predicts, where it gives one: T+1 (p = 0),
/// 2T (p = 1), 3T-2 (p = 2, beta = 0), 4(T-1) (p = 2, generic covariates).
std::optional<std::size_t> expected_span_rank(const ModelSpec& spec, CovariateRegime regime);

struct RankBudget {
  std::size_t rows = 0;    // rows per sampled trial; 0 selects expected rank + 4
  std::size_t trials = 3;  // independent seeds for sampled ranks
  bool full_rows = false;  // use 2^T rows
};

/// Rank of the alpha-span of the probability vectors at fixed (init, c, b).
/// With b = 1 the rank is exact via polynomial coefficients (the
/// P-double-dot route for p = 1, the cleared P-bar route otherwise);
/// otherwise it is the exact rank of P-bar on random rows, repeated over
/// budget.trials seeds. Throws std::invalid_argument when the budget is too
/// small to leave a margin of two rows.
RankCertificate span_rank(const ModelSpec& spec, std::span<const Rational> c,
                          std::span<const Rational> b, const RankBudget& budget,
                          std::uint64_t seed);

/// Valid moment functions as columns over outcomes (row h-1 is outcome h).
struct MomentBasis {
  ModelSpec spec;
  std::vector<Rational> c;
  std::vector<Rational> b;
  RationalMatrix basis;  // 2^T x d, canonical
  std::size_t d = 0;
  AlphaDraws construction_draws;
  RankCertificate certificate;
};

/// Canonical nullspace of P-bar stacked over enough alpha rows to reach the
/// certified span rank.
MomentBasis moment_basis(const ModelSpec& spec, std::span<const Rational> c,
                         std::span<const Rational> b, const RankBudget& budget,
                         std::uint64_t seed);

struct BasisValidation {
  bool valid = true;
  std::size_t n_fresh = 0;
  Rational max_abs_violation{0};
  std::optional<Rational> offending_u;
  std::optional<std::size_t> offending_column;
  bool columns_independent = true;
};

/// Checks P-bar(fresh u) * basis == 0 exactly at n_fresh draws disjoint from
/// the construction draws.
BasisValidation validate_basis(const MomentBasis& basis, std::size_t n_fresh, std::uint64_t seed);

struct DimensionCell {
  int p = 1;
  int T = 2;
  std::vector<int> init;
  CovariateDesign design;
};

struct DimensionRow {
  DimensionCell cell;
  std::size_t rank = 0;
  std::size_t dim = 0;
  std::optional<std::size_t> expected;  // expected dimension
  bool asserted = false;                // false for informational rows
  bool match = false;
  RankCertificate certificate;
  std::vector<Rational> c;
  std::vector<Rational> b;
  std::string note;
};

struct DimensionReport {
  std::vector<DimensionRow> rows;
  std::uint64_t seed = 0;

  /// True iff every asserted row matches its expected dimension.
  bool passed() const;
};

/// One row per cell. Expected dimensions: 2^T - 2T (p = 1), 2^T - (3T-2)
/// (p = 2, beta = 0), 2^T - 4(T-1) (p = 2, generic), 2^T - (T+1) (p = 0).
/// p = 3 rows carry 2^T - 8(T-2) as an unasserted conjecture.
DimensionReport dimension_report(std::span<const DimensionCell> cells, std::uint64_t seed,
                                 const RankBudget& budget = {});

/// p = 1: T = 2..8 (beta0, generic); p = 2: T = 3..5 (beta0, generic);
/// p = 0: T = 2..6; p = 3: T = 4..5 (generic, informational).
std::vector<DimensionCell> default_dimension_grid();

struct PatternReport {
  int T = 3;
  std::vector<int> init;
  std::string pattern;
  std::size_t pattern_dim = 0;
  std::size_t generic_dim = 0;
  std::size_t surplus = 0;
  std::size_t lower_bound = 0;  // T - 2
  bool passed = false;          // surplus >= lower_bound
};

/// AR(2) dimension with b_2 = ... = b_T against generic covariates, with
/// the same lag coefficients. Requires T in 3..5.
PatternReport covariate_pattern_experiment(int T, const std::vector<int>& init, std::uint64_t seed);

struct StackedReport {
  int T = 3;
  std::vector<std::size_t> single_ranks;  // one per covariate draw
  std::size_t stacked_rank = 0;
  bool identical_draws = false;
};

/// AR(1) probability rows stacked over several covariate vectors (the
/// constraints on an x-independent moment function).
StackedReport stacked_x_rank(int T, std::size_t x_draw_count, std::uint64_t seed,
                             bool identical_draws = false);

}  // namespace plogit
