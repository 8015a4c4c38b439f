#include "plogit/moment_space.hpp"

#include "plogit/exact_linalg.hpp"
#include "plogit/polynomial.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace plogit {

std::string_view to_string(CovariateRegime regime) {
  switch (regime) {
    case CovariateRegime::none: return "beta0";
    case CovariateRegime::generic: return "generic";
    case CovariateRegime::pattern: return "pattern";
  }
  return "unknown";
}

CovariateDesign CovariateDesign::equal_from(int T, int first) {
  if (first < 1 || first > T) throw std::invalid_argument("equal_from: period out of range");
  CovariateDesign d{CovariateRegime::pattern, {}};
  for (int t = 1; t <= T; ++t) d.groups.push_back(t < first ? t : first);
  return d;
}

std::string CovariateDesign::label() const {
  if (regime != CovariateRegime::pattern) return std::string(to_string(regime));
  std::map<int, std::vector<int>> members;
  for (std::size_t t = 0; t < groups.size(); ++t) members[groups[t]].push_back(static_cast<int>(t + 1));
  std::string out;
  for (const auto& [label, periods] : members) {
    if (periods.size() < 2) continue;
    if (!out.empty()) out += ",";
    for (std::size_t k = 0; k < periods.size(); ++k)
      out += (k ? "=x" : "x") + std::to_string(periods[k]);
  }
  return out.empty() ? "generic" : out;
}

std::vector<Rational> CovariateDesign::draw_b(int T, Rng& rng) const {
  const auto n = static_cast<std::size_t>(T);
  switch (regime) {
    case CovariateRegime::none: return std::vector<Rational>(n, Rational(1));
    case CovariateRegime::generic: return draw_distinct(rng, n);
    case CovariateRegime::pattern: {
      if (groups.size() != n) throw std::invalid_argument("pattern needs one group label per period");
      std::vector<int> labels = groups;
      std::sort(labels.begin(), labels.end());
      labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
      const auto values = draw_distinct(rng, labels.size());
      std::vector<Rational> b;
      for (int g : groups) {
        const auto pos = static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), g) - labels.begin());
        b.push_back(values[pos]);
      }
      return b;
    }
  }
  throw std::logic_error("unhandled covariate regime");
}

std::optional<std::size_t> expected_span_rank(const ModelSpec& spec, CovariateRegime regime) {
  const auto T = static_cast<std::size_t>(spec.T);
  switch (spec.p) {
    case 0:
      if (regime == CovariateRegime::pattern) return std::nullopt;
      return T + 1;
    case 1:
      return std::min(2 * T, spec.outcome_count());
    case 2:
      if (regime == CovariateRegime::none) return 3 * T - 2;
      if (regime == CovariateRegime::generic) return std::min(4 * (T - 1), spec.outcome_count());
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

namespace {

bool all_ones(std::span<const Rational> b) {
  return std::all_of(b.begin(), b.end(), [](const Rational& v) { return v == 1; });
}

bool all_distinct(std::span<const Rational> b) {
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (b[i] == b[j]) return false;
  return true;
}

CovariateRegime infer_regime(std::span<const Rational> b) {
  if (all_ones(b)) return CovariateRegime::none;
  return all_distinct(b) ? CovariateRegime::generic : CovariateRegime::pattern;
}

std::size_t sampled_rows(const ModelSpec& spec, CovariateRegime regime, const RankBudget& budget) {
  if (budget.full_rows) return spec.outcome_count();
  if (budget.rows) return budget.rows;
  const auto expected = expected_span_rank(spec, regime);
  return expected ? *expected + 4 : spec.outcome_count() + 2;
}

}  // namespace

RankCertificate span_rank(const ModelSpec& spec, std::span<const Rational> c,
                          std::span<const Rational> b, const RankBudget& budget,
                          std::uint64_t seed) {
  spec.validate();
  if (c.size() != static_cast<std::size_t>(spec.p) || b.size() != static_cast<std::size_t>(spec.T))
    throw std::invalid_argument("span_rank: parameter lengths do not match the spec");
  const CovariateRegime regime = infer_regime(b);
  if (regime == CovariateRegime::none)
    return coeff_matrix_rank(spec, c, spec.p == 1 ? PolyRoute::pddot : PolyRoute::cleared_pbar);

  const std::size_t full = spec.outcome_count();
  const std::size_t rows = sampled_rows(spec, regime, budget);
  const auto expected = expected_span_rank(spec, regime);
  if (expected && rows < *expected + 2 && rows < full)
    throw std::invalid_argument("rank budget too small: rows must be at least expected rank + 2");
  if (budget.trials < 1) throw std::invalid_argument("rank budget needs at least one trial");

  RankCertificate cert;
  cert.method = RankMethod::sampled_lower_bound;
  cert.draws_used = rows;
  for (std::size_t k = 0; k < budget.trials; ++k) {
    const std::uint64_t s = derive_seed(seed, {k});
    const AlphaDraws draws = draw_alpha(rows, s);
    cert.seeds.push_back(s);
    cert.trial_ranks.push_back(linalg::rank(build_pbar(spec, c, b, draws).matrix));
  }
  cert.claimed_rank = *std::max_element(cert.trial_ranks.begin(), cert.trial_ranks.end());
  cert.stable_across_trials =
      std::all_of(cert.trial_ranks.begin(), cert.trial_ranks.end(),
                  [&](std::size_t r) { return r == cert.claimed_rank; });
  if (cert.claimed_rank < full && cert.claimed_rank + 2 > rows)
    throw std::invalid_argument("rank budget too small: sampled rank reached the row count");
  return cert;
}

MomentBasis moment_basis(const ModelSpec& spec, std::span<const Rational> c,
                         std::span<const Rational> b, const RankBudget& budget,
                         std::uint64_t seed) {
  MomentBasis out;
  out.spec = spec;
  out.c.assign(c.begin(), c.end());
  out.b.assign(b.begin(), b.end());
  out.certificate = span_rank(spec, c, b, budget, seed);
  const std::size_t target = out.certificate.claimed_rank;
  const std::size_t full = spec.outcome_count();
  const std::size_t rows = budget.full_rows ? full : std::max(budget.rows, target + 4);

  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    AlphaDraws draws = draw_alpha(rows, derive_seed(seed, {0xba515ULL, attempt}));
    RationalMatrix null = linalg::nullspace(build_pbar(spec, c, b, draws).matrix);
    const std::size_t rank = full - null.cols();
    if (rank > target && out.certificate.method == RankMethod::polynomial_exact)
      throw std::logic_error("probability rows exceed the exact polynomial rank");
    if (rank >= target) {
      out.d = null.cols();
      out.basis = std::move(null);
      out.construction_draws = std::move(draws);
      return out;
    }
  }
  throw std::runtime_error("could not reach the certified rank with random alpha rows");
}

BasisValidation validate_basis(const MomentBasis& basis, std::size_t n_fresh, std::uint64_t seed) {
  if (n_fresh < 1) throw std::invalid_argument("validate_basis needs at least one fresh draw");
  BasisValidation report;
  report.n_fresh = n_fresh;
  report.columns_independent = linalg::rank(basis.basis) == basis.d;
  if (basis.d == 0) return report;

  const AlphaDraws fresh = draw_alpha(n_fresh, seed, basis.construction_draws.u);
  const RationalMatrix pbar = build_pbar(basis.spec, basis.c, basis.b, fresh).matrix;
  const RationalMatrix residual = pbar * basis.basis;
  for (std::size_t g = 0; g < residual.rows(); ++g) {
    for (std::size_t j = 0; j < residual.cols(); ++j) {
      const Rational v = abs(residual(g, j));
      if (v == 0) continue;
      if (report.valid) {
        report.valid = false;
        report.offending_u = fresh.u[g];
        report.offending_column = j;
      }
      if (v > report.max_abs_violation) report.max_abs_violation = v;
    }
  }
  return report;
}

bool DimensionReport::passed() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const DimensionRow& r) { return !r.asserted || r.match; });
}

DimensionReport dimension_report(std::span<const DimensionCell> cells, std::uint64_t seed,
                                 const RankBudget& budget) {
  DimensionReport report;
  report.seed = seed;
  for (const auto& cell : cells) {
    const ModelSpec spec{cell.p, cell.T, cell.init};
    spec.validate();
    std::uint64_t init_code = 0;
    for (int v : cell.init) init_code = init_code * 2 + static_cast<std::uint64_t>(v);
    std::uint64_t group_code = 0;
    for (int g : cell.design.groups) group_code = group_code * 31 + static_cast<std::uint64_t>(g);
    const std::uint64_t cell_seed =
        derive_seed(seed, {static_cast<std::uint64_t>(cell.p), static_cast<std::uint64_t>(cell.T),
                           init_code, static_cast<std::uint64_t>(cell.design.regime), group_code});
    Rng rng(cell_seed);

    DimensionRow row;
    row.cell = cell;
    row.c = draw_lag_coefficients(rng, cell.p);
    row.b = cell.design.draw_b(cell.T, rng);
    row.certificate = span_rank(spec, row.c, row.b, budget, derive_seed(cell_seed, {1}));
    row.rank = row.certificate.claimed_rank;
    row.dim = spec.outcome_count() - row.rank;

    const auto full = static_cast<long>(spec.outcome_count());
    if (cell.p == 3) {
      if (cell.design.regime == CovariateRegime::generic) {
        row.expected = static_cast<std::size_t>(std::max(0L, full - 8L * (cell.T - 2)));
        row.note = "conjectured 2^T-(T+1-p)2^p; informational";
      }
      row.asserted = false;
    } else if (const auto rank = expected_span_rank(spec, cell.design.regime)) {
      row.expected = spec.outcome_count() - *rank;
      row.asserted = true;
      if (cell.p == 2 && cell.design.regime == CovariateRegime::generic)
        row.note = "derived consistency target 2^T-4(T-1)";
    }
    row.match = row.expected && *row.expected == row.dim &&
                (row.certificate.method == RankMethod::polynomial_exact ||
                 row.certificate.stable_across_trials);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<DimensionCell> default_dimension_grid() {
  std::vector<DimensionCell> cells;
  for (int T = 2; T <= 8; ++T) {
    cells.push_back({1, T, {0}, CovariateDesign::beta0()});
    cells.push_back({1, T, {0}, CovariateDesign::generic()});
  }
  for (int T = 3; T <= 5; ++T) {
    cells.push_back({2, T, {0, 0}, CovariateDesign::beta0()});
    cells.push_back({2, T, {0, 0}, CovariateDesign::generic()});
  }
  for (int T = 2; T <= 6; ++T) cells.push_back({0, T, {}, CovariateDesign::beta0()});
  for (int T = 4; T <= 5; ++T) cells.push_back({3, T, {0, 0, 0}, CovariateDesign::generic()});
  return cells;
}

PatternReport covariate_pattern_experiment(int T, const std::vector<int>& init, std::uint64_t seed) {
  if (T < 3 || T > 5) throw std::invalid_argument("covariate pattern experiment covers T = 3..5");
  const ModelSpec spec{2, T, init};
  spec.validate();
  Rng rng(seed);
  const auto c = draw_lag_coefficients(rng, 2);
  const auto design = CovariateDesign::equal_from(T, 2);
  const auto b_pattern = design.draw_b(T, rng);
  const auto b_generic = CovariateDesign::generic().draw_b(T, rng);

  PatternReport report;
  report.T = T;
  report.init = init;
  report.pattern = design.label();
  const RankBudget budget{};
  const auto pattern_rank = span_rank(spec, c, b_pattern, budget, derive_seed(seed, {1}));
  const auto generic_rank = span_rank(spec, c, b_generic, budget, derive_seed(seed, {2}));
  report.pattern_dim = spec.outcome_count() - pattern_rank.claimed_rank;
  report.generic_dim = spec.outcome_count() - generic_rank.claimed_rank;
  report.surplus = report.pattern_dim >= report.generic_dim ? report.pattern_dim - report.generic_dim : 0;
  report.lower_bound = static_cast<std::size_t>(T - 2);
  report.passed = report.pattern_dim >= report.generic_dim && report.surplus >= report.lower_bound &&
                  pattern_rank.stable_across_trials && generic_rank.stable_across_trials;
  return report;
}

StackedReport stacked_x_rank(int T, std::size_t x_draw_count, std::uint64_t seed,
                             bool identical_draws) {
  if (x_draw_count < 2) throw std::invalid_argument("stacked_x_rank needs at least two covariate draws");
  const ModelSpec spec{1, T, {0}};
  spec.validate();
  Rng rng(seed);
  const auto c = draw_lag_coefficients(rng, 1);
  const std::size_t rows = static_cast<std::size_t>(2 * T + 4);

  StackedReport report;
  report.T = T;
  report.identical_draws = identical_draws;
  RationalMatrix stacked;
  std::vector<Rational> first_b;
  for (std::size_t k = 0; k < x_draw_count; ++k) {
    std::vector<Rational> b =
        (identical_draws && k > 0) ? first_b : CovariateDesign::generic().draw_b(T, rng);
    if (k == 0) first_b = b;
    const AlphaDraws draws = draw_alpha(rows, derive_seed(seed, {k}));
    const RationalMatrix block = build_pbar(spec, c, b, draws).matrix;
    report.single_ranks.push_back(linalg::rank(block));
    stacked.append_rows(block);
  }
  report.stacked_rank = linalg::rank(stacked);
  return report;
}

}  // namespace plogit
