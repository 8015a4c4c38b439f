#include "plogit/cli.hpp"

#include "plogit/exact_linalg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

namespace plogit::cli {

namespace {

using gmm::AlphaDistribution;
using gmm::InitScheme;

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int(std::string_view s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw UsageError("not an integer: " + std::string(s));
  return v;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw UsageError("not a number: " + s);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("not a number: " + s);
  }
}

bool needs_single_init(const std::string& command) {
  return command == "basis" || command == "simulate" || command == "estimate" ||
         command == "mc" || command == "stacked" || command == "lemma1";
}

std::vector<int> default_T(const std::string& command, int p) {
  auto range = [](int a, int b) {
    std::vector<int> v;
    for (int t = a; t <= b; ++t) v.push_back(t);
    return v;
  };
  if (command == "rank" || command == "dims") {
    switch (p) {
      case 0: return range(2, 6);
      case 1: return range(2, 8);
      case 2: return range(3, 5);
      default: return range(4, 5);
    }
  }
  if (command == "basis") return {p >= 2 ? 4 : 3};
  if (command == "patterns") return range(3, 5);
  if (command == "lemma1") return range(2, 6);
  if (command == "poly") return p == 2 ? range(3, 5) : range(2, 7);
  return {3};
}

std::vector<std::vector<int>> histories(const RunConfig& cfg) {
  if (cfg.init != "all") return {bits_from_string(cfg.init)};
  std::vector<std::vector<int>> out;
  for (int code = 0; code < (1 << cfg.p); ++code) {
    std::vector<int> h(cfg.p);
    for (int k = 0; k < cfg.p; ++k) h[k] = (code >> k) & 1;
    out.push_back(h);
  }
  return out;
}

std::vector<CovariateDesign> designs(const RunConfig& cfg) {
  if (cfg.covariates == "beta0") return {CovariateDesign::beta0()};
  if (cfg.covariates == "generic") return {CovariateDesign::generic()};
  return {CovariateDesign::beta0(), CovariateDesign::generic()};
}

std::vector<Rational> parse_rationals(const std::vector<std::string>& values) {
  std::vector<Rational> out;
  for (const auto& s : values) {
    try {
      out.push_back(parse_rational(s));
    } catch (const std::exception& e) {
      throw UsageError("bad rational '" + s + "': " + e.what());
    }
  }
  return out;
}

AlphaDistribution parse_alpha(const std::string& text) {
  const auto parts = split(text, ':');
  AlphaDistribution a;
  if (parts[0] == "normal" && parts.size() == 3) {
    a = AlphaDistribution::normal(parse_double(parts[1]), parse_double(parts[2]));
  } else if (parts[0] == "uniform" && parts.size() == 3) {
    a = AlphaDistribution::uniform(parse_double(parts[1]), parse_double(parts[2]));
  } else if (parts[0] == "two_point" && parts.size() == 4) {
    a = AlphaDistribution::two_point(parse_double(parts[1]), parse_double(parts[2]),
                                     parse_double(parts[3]));
  } else {
    throw UsageError("alpha must be normal:m:s, uniform:lo:hi or two_point:a:b:prob");
  }
  a.validate();
  return a;
}

InitScheme parse_init_scheme(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts[0] == "fixed" && parts.size() == 1) return {InitScheme::Kind::fixed, 0.5};
  if (parts[0] == "bernoulli" && parts.size() == 2)
    return {InitScheme::Kind::bernoulli, parse_double(parts[1])};
  throw UsageError("init scheme must be fixed or bernoulli:q");
}

std::string cell_name(int p, int T, const std::vector<int>& init, const std::string& pattern) {
  return "p=" + std::to_string(p) + " T=" + std::to_string(T) + " init=" +
         bits_to_string(init) + " " + pattern;
}

std::vector<Rational> lag_coefficients(const RunConfig& cfg, std::uint64_t seed) {
  if (!cfg.c.empty()) return parse_rationals(cfg.c);
  Rng rng(seed);
  return draw_lag_coefficients(rng, cfg.p);
}

std::vector<Rational> covariate_indices(const RunConfig& cfg, const CovariateDesign& design,
                                        int T, std::uint64_t seed) {
  if (!cfg.b.empty()) return parse_rationals(cfg.b);
  Rng rng(seed);
  return design.draw_b(T, rng);
}

std::string pattern_label(const RunConfig& cfg, const CovariateDesign& design) {
  return cfg.b.empty() ? design.label() : "explicit";
}

std::uint64_t design_tag(const CovariateDesign& d) { return static_cast<std::uint64_t>(d.regime); }

std::uint64_t init_tag(const std::vector<int>& init) {
  std::uint64_t tag = 1;
  for (int v : init) tag = 2 * tag + static_cast<std::uint64_t>(v);
  return tag;
}

// ---- commands -------------------------------------------------------------

void cmd_rank(const RunConfig& cfg, Report& rep) {
  rep.csv_columns = {"p",     "T",      "init",  "pattern",     "rank",
                     "expected", "match", "method", "seeds", "pbreve_rank", "ratio_rank1"};
  RankBudget budget;
  budget.trials = cfg.trials;
  json shared = json::array();
  for (int T : *cfg.T) {
    for (const auto& design : designs(cfg)) {
      const std::uint64_t base = derive_seed(cfg.seed, {static_cast<std::uint64_t>(T), design_tag(design)});
      const auto c = lag_coefficients(cfg, derive_seed(base, {1}));
      const auto b = covariate_indices(cfg, design, T, derive_seed(base, {2}));
      std::vector<RationalMatrix> ratios;
      for (const auto& init : histories(cfg)) {
        const ModelSpec spec{cfg.p, T, init};
        const auto cert = span_rank(spec, c, b, budget, derive_seed(base, {3, init_tag(init)}));
        std::optional<std::size_t> expected;
        if (cfg.b.empty()) expected = expected_span_rank(spec, design.regime);
        json row{{"p", cfg.p},
                 {"T", T},
                 {"init", bits_to_string(init)},
                 {"pattern", pattern_label(cfg, design)},
                 {"rank", cert.claimed_rank},
                 {"expected", expected ? json(*expected) : json(nullptr)},
                 {"match", expected ? json(*expected == cert.claimed_rank) : json(nullptr)},
                 {"method", std::string(to_string(cert.method))},
                 {"seeds", cert.seeds},
                 {"stable", cert.stable_across_trials},
                 {"c", c},
                 {"b", b}};
        const std::string name = cell_name(cfg.p, T, init, pattern_label(cfg, design));
        if (expected.has_value()) {
          const std::size_t want = expected.value_or(0);
          rep.asserted = true;
          if (want != cert.claimed_rank)
            rep.fail(name + ": rank " + std::to_string(cert.claimed_rank) + ", expected " +
                     std::to_string(want));
        }
        if (cfg.p == 1 || cfg.p == 2) {
          // Diagonal relation between the probabilities and their rescaling.
          const auto draws =
              draw_alpha(cert.claimed_rank + 4, derive_seed(base, {4, init_tag(init)}));
          const auto pbar = build_pbar(spec, c, b, draws);
          const auto pbreve = build_pbreve(spec, draws, c, b);
          const auto rbar = linalg::rank(pbar.matrix);
          const auto rbreve = linalg::rank(pbreve.matrix);
          const bool rank1 = ratio_rank1_check(pbar, pbreve);
          row["pbar_rank"] = rbar;
          row["pbreve_rank"] = rbreve;
          row["ratio_rank1"] = rank1;
          rep.asserted = true;
          if (rbar != rbreve) rep.fail(name + ": rank(Pbar) != rank(Pbreve)");
          if (!rank1) rep.fail(name + ": elementwise ratio has rank > 1");
          // Same draws for every initial condition.
          const auto common = draw_alpha(cert.claimed_rank + 4, derive_seed(base, {5}));
          ratios.push_back(
              elementwise_ratio(build_pbar(spec, c, b, common), build_pbreve(spec, common, c, b)));
        }
        rep.rows.push_back(std::move(row));
      }
      if (ratios.size() > 1) {
        bool same = true;
        for (std::size_t k = 1; k < ratios.size(); ++k)
          same = same && shared_column_factor(ratios[0], ratios[k]);
        shared.push_back({{"T", T}, {"pattern", pattern_label(cfg, design)}, {"shared", same}});
      }
    }
  }
  rep.results["shared_column_factor_across_inits"] = shared;
}

void cmd_basis(const RunConfig& cfg, Report& rep) {
  rep.csv_columns = {"p",   "T",     "init",   "pattern", "rank", "dim", "expected",
                     "match", "method", "seeds", "valid",   "max_abs_violation"};
  const int T = cfg.T->front();
  const auto init = bits_from_string(cfg.init);
  const auto design = designs(cfg).front();
  const ModelSpec spec{cfg.p, T, init};
  const std::uint64_t base = derive_seed(cfg.seed, {static_cast<std::uint64_t>(T), design_tag(design)});
  const auto c = lag_coefficients(cfg, derive_seed(base, {1}));
  const auto b = covariate_indices(cfg, design, T, derive_seed(base, {2}));
  RankBudget budget;
  budget.trials = cfg.trials;
  const auto basis = moment_basis(spec, c, b, budget, derive_seed(base, {3}));
  const auto validation = validate_basis(basis, cfg.n_fresh, derive_seed(base, {4}));
  const auto exp_rank =
      cfg.b.empty() ? expected_span_rank(spec, design.regime) : std::optional<std::size_t>{};
  std::optional<std::size_t> expected;
  if (exp_rank) expected = spec.outcome_count() - *exp_rank;

  rep.results["basis"] = basis;
  rep.results["validation"] = validation;
  json row{{"p", cfg.p},
           {"T", T},
           {"init", cfg.init},
           {"pattern", pattern_label(cfg, design)},
           {"rank", basis.certificate.claimed_rank},
           {"dim", basis.d},
           {"expected", expected ? json(*expected) : json(nullptr)},
           {"match", expected ? json(*expected == basis.d) : json(nullptr)},
           {"method", std::string(to_string(basis.certificate.method))},
           {"seeds", basis.certificate.seeds},
           {"valid", validation.valid},
           {"max_abs_violation", validation.max_abs_violation}};
  rep.rows.push_back(row);

  const std::string name = cell_name(cfg.p, T, init, pattern_label(cfg, design));
  rep.asserted = true;
  if (!validation.valid) rep.fail(name + ": basis fails on a fresh draw");
  if (!validation.columns_independent) rep.fail(name + ": basis columns are dependent");
  if (expected && *expected != basis.d)
    rep.fail(name + ": dimension " + std::to_string(basis.d) + ", expected " +
             std::to_string(*expected));
}

void cmd_dims(const RunConfig& cfg, Report& rep) {
  rep.csv_columns = {"p", "T", "init", "pattern", "rank", "dim", "expected", "match", "method", "seeds"};
  std::vector<DimensionCell> cells;
  if (cfg.full_grid) {
    cells = default_dimension_grid();
  } else {
    for (int T : *cfg.T)
      for (const auto& init : histories(cfg))
        for (const auto& design : designs(cfg)) cells.push_back({cfg.p, T, init, design});
  }
  RankBudget budget;
  budget.trials = cfg.trials;
  const auto report = dimension_report(cells, cfg.seed, budget);
  std::size_t asserted = 0;
  for (const auto& row : report.rows) {
    rep.rows.push_back(json(row));
    if (!row.asserted) continue;
    ++asserted;
    rep.asserted = true;
    if (!row.match)
      rep.fail(cell_name(row.cell.p, row.cell.T, row.cell.init, row.cell.design.label()) +
               ": dim " + std::to_string(row.dim) + ", expected " +
               (row.expected ? std::to_string(*row.expected) : std::string("none")));
  }
  rep.results["cells"] = report.rows.size();
  rep.results["asserted_cells"] = asserted;
}

void cmd_patterns(const RunConfig& cfg, Report& rep) {
  rep.csv_columns = {"T", "init", "pattern", "pattern_dim", "generic_dim", "surplus", "lower_bound", "passed"};
  for (int T : *cfg.T) {
    for (const auto& init : histories(cfg)) {
      const auto r = covariate_pattern_experiment(
          T, init, derive_seed(cfg.seed, {static_cast<std::uint64_t>(T), init_tag(init)}));
      rep.rows.push_back(json(r));
      rep.asserted = true;
      if (!r.passed)
        rep.fail(cell_name(2, T, init, r.pattern) + ": surplus " + std::to_string(r.surplus) +
                 " below " + std::to_string(r.lower_bound));
    }
  }
}

void cmd_stacked(const RunConfig& cfg, Report& rep) {
  rep.csv_columns = {"T", "single_ranks", "expected_single", "stacked_rank", "identical_draws"};
  for (int T : *cfg.T) {
    const auto r =
        stacked_x_rank(T, cfg.x_draws, derive_seed(cfg.seed, {static_cast<std::uint64_t>(T)}));
    json row = r;
    const std::size_t expected = std::min<std::size_t>(2 * T, std::size_t{1} << T);
    row["expected_single"] = expected;
    row["stacked_exceeds_single"] = r.stacked_rank > expected;
    rep.rows.push_back(row);
    rep.asserted = true;
    for (std::size_t k = 0; k < r.single_ranks.size(); ++k)
      if (r.single_ranks[k] != expected)
        rep.fail("T=" + std::to_string(T) + " draw " + std::to_string(k) + ": single rank " +
                 std::to_string(r.single_ranks[k]) + ", expected " + std::to_string(expected));
  }
}

void cmd_lemma1(const RunConfig& cfg, Report& rep) {
  rep.csv_columns = {"T", "trials", "nonzero_dets", "selections", "full_rank_selections"};
  for (int T : *cfg.T) {
    if (T < 2 || T > kMaxHorizon) throw UsageError("lemma1 needs T in 2..16");
    const auto n = static_cast<std::size_t>(2 * T);
    std::size_t nonzero = 0;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t s = derive_seed(cfg.seed, {static_cast<std::uint64_t>(T), 1, trial});
      Rng rng(s);
      const auto c = draw_lag_coefficients(rng, 1);
      const auto draws = draw_alpha(n, derive_seed(s, {1}));
      if (linalg::det(build_ptilde(T, draws, c[0]).matrix) != 0) ++nonzero;
    }
    std::size_t full = 0;
    const ModelSpec spec{1, T, {0}};
    const std::vector<Rational> ones(T, Rational(1));
    for (std::size_t k = 0; k < cfg.selections; ++k) {
      const std::uint64_t s = derive_seed(cfg.seed, {static_cast<std::uint64_t>(T), 2, k});
      Rng rng(s);
      const auto c = draw_lag_coefficients(rng, 1);
      const auto cols = balanced_selection(T, rng);
      const auto draws = draw_alpha(n, derive_seed(s, {1}));
      const auto pbreve = build_pbreve(spec, draws, c, ones);
      std::vector<std::size_t> zero_based;
      for (auto h : cols) zero_based.push_back(h - 1);
      if (linalg::rank(pbreve.matrix.select_columns(zero_based)) == n) ++full;
    }
    rep.rows.push_back({{"T", T},
                        {"trials", cfg.trials},
                        {"nonzero_dets", nonzero},
                        {"selections", cfg.selections},
                        {"full_rank_selections", full}});
    rep.asserted = true;
    if (nonzero != cfg.trials)
      rep.fail("T=" + std::to_string(T) + ": " + std::to_string(cfg.trials - nonzero) +
               " vanishing determinants");
    if (full != cfg.selections)
      rep.fail("T=" + std::to_string(T) + ": " + std::to_string(cfg.selections - full) +
               " rank-deficient selections");
  }
}

void cmd_poly(const RunConfig& cfg, Report& rep) {
  if (cfg.p != 1 && cfg.p != 2) throw UsageError("poly supports p = 1 and p = 2");
  rep.csv_columns = {"p", "T", "init", "rank", "expected", "max_degree", "degree_bound", "match"};
  for (int T : *cfg.T) {
    for (const auto& init : histories(cfg)) {
      const ModelSpec spec{cfg.p, T, init};
      spec.validate();
      const auto c = lag_coefficients(
          cfg, derive_seed(cfg.seed, {static_cast<std::uint64_t>(T), init_tag(init)}));
      const auto polys = column_polys(spec, c, PolyRoute::pddot);
      int max_degree = -1;
      for (const auto& q : polys) max_degree = std::max(max_degree, q.degree());
      const auto cert = coeff_matrix_rank(spec, c, PolyRoute::pddot);
      const std::size_t expected = cfg.p == 1 ? 2 * T : 3 * T - 2;
      json row{{"p", cfg.p},
               {"T", T},
               {"init", bits_to_string(init)},
               {"rank", cert.claimed_rank},
               {"expected", expected},
               {"max_degree", max_degree},
               {"match", cert.claimed_rank == expected},
               {"c", c}};
      const std::string name = cell_name(cfg.p, T, init, "beta0");
      rep.asserted = true;
      if (cert.claimed_rank != expected)
        rep.fail(name + ": coefficient rank " + std::to_string(cert.claimed_rank) +
                 ", expected " + std::to_string(expected));
      if (cfg.p == 1) {
        row["degree_bound"] = 2 * T - 1;
        if (max_degree > 2 * T - 1) rep.fail(name + ": degree above 2T-1");
      } else {
        row["degree_bound"] = nullptr;
      }
      rep.rows.push_back(std::move(row));
    }
  }
}

gmm::SimConfig sim_config(const RunConfig& cfg, std::size_t N) {
  gmm::SimConfig sc;
  sc.N = N;
  sc.spec = ModelSpec{cfg.p, cfg.T->front(), bits_from_string(cfg.init)};
  sc.true_gamma = cfg.gamma;
  sc.true_beta = cfg.beta;
  sc.alpha = parse_alpha(cfg.alpha);
  sc.init = parse_init_scheme(cfg.init_scheme);
  if (cfg.beta != 0.0) sc.x = {gmm::XScheme::Kind::iid_normal, 1.0};
  sc.seed = cfg.seed;
  sc.validate();
  return sc;
}

gmm::SearchOptions search_options(const RunConfig& cfg) {
  gmm::SearchOptions s;
  s.svd_threshold = cfg.svd_threshold;
  s.strict_dimension = !cfg.lenient_svd;
  return s;
}

void cmd_simulate(const RunConfig& cfg, Report& rep) {
  rep.csv_columns = {"i", "init", "y"};
  const auto data = gmm::simulate_panel(sim_config(cfg, cfg.N));
  double ones = 0.0;
  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < data.individuals.size(); ++i) {
    const auto& ind = data.individuals[i];
    ones += ind.y.sum();
    const std::string key = bits_to_string(ind.init) + ":" + ind.y.to_string();
    ++counts[key];
    json row{{"i", i}, {"init", bits_to_string(ind.init)}, {"y", ind.y.to_string()}};
    if (!ind.x_index.empty()) row["x_index"] = ind.x_index;
    rep.rows.push_back(std::move(row));
  }
  rep.results["N"] = data.individuals.size();
  rep.results["mean_y"] = ones / (static_cast<double>(data.individuals.size()) * data.T);
  rep.results["counts"] = counts;
}

void cmd_estimate(const RunConfig& cfg, Report& rep) {
  rep.csv_columns = {"N", "T", "p", "gamma_true", "gamma_hat", "objective_value", "converged"};
  const auto data = gmm::simulate_panel(sim_config(cfg, cfg.N));
  const auto est = gmm::estimate_gmm(data, search_options(cfg));
  rep.results["estimate"] = est;
  rep.results["gamma_true"] = cfg.gamma;
  rep.rows.push_back({{"N", cfg.N},
                      {"T", cfg.T->front()},
                      {"p", cfg.p},
                      {"gamma_true", cfg.gamma},
                      {"gamma_hat", est.gamma_hat},
                      {"objective_value", est.objective_value},
                      {"converged", est.converged}});
  rep.asserted = true;
  if (!est.converged) rep.fail("estimate: minimizer on the search-grid boundary");
}

void cmd_mc(const RunConfig& cfg, Report& rep) {
  rep.csv_columns = {"N",    "T",       "p",    "gamma_true", "reps",
                     "mean_bias", "median_bias", "rmse", "failures",   "seed"};
  const auto summary = gmm::monte_carlo(sim_config(cfg, cfg.sample_sizes.front()), cfg.reps, search_options(cfg),
                                        cfg.sample_sizes, cfg.threads);
  for (const auto& row : summary.rows) {
    json j = row;
    j["sd"] = row.sd;
    j["coverage_2sd"] =
        row.estimates.size() >= 2 ? json(gmm::coverage_fraction(row.estimates, row.gamma_true)) : json(nullptr);
    rep.rows.push_back(j);
  }
  rep.results["rmse_ratio"] = summary.rmse_ratio ? json(*summary.rmse_ratio) : json(nullptr);
  if (!cfg.check) return;
  rep.asserted = true;
  for (const auto& row : summary.rows)
    if (!(std::abs(row.median_bias) < 0.05))
      rep.fail("N=" + std::to_string(row.N) + ": |median bias| >= 0.05");
  if (summary.rows.size() == 2) {
    const double r = summary.rmse_ratio.value_or(0.0);
    if (!(r >= 1.5 && r <= 2.7)) rep.fail("RMSE ratio outside [1.5, 2.7]");
  } else {
    rep.fail("--check needs exactly two sample sizes");
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"rank",   "basis", "dims",     "patterns", "stacked",
                                              "lemma1", "poly",  "simulate", "estimate", "mc"};
  return names;
}

std::vector<int> parse_range(std::string_view text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    const int a = parse_int(text.substr(0, dots));
    const int b = parse_int(text.substr(dots + 2));
    for (int t = a; t <= b; ++t) out.push_back(t);
    return out;
  }
  for (const auto& part : split(text, ',')) out.push_back(parse_int(part));
  return out;
}

RunConfig resolve(RunConfig cfg) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), cfg.command) == names.end())
    throw UsageError("unknown command '" + cfg.command + "'");
  if (cfg.p < 0 || cfg.p > 3) throw UsageError("p must be in 0..3");
  if (cfg.covariates != "beta0" && cfg.covariates != "generic" && cfg.covariates != "both")
    throw UsageError("covariates must be beta0, generic or both");
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("format must be json or csv");

  if (cfg.command == "stacked" || cfg.command == "lemma1") cfg.p = 1;
  if (cfg.command == "patterns") cfg.p = 2;
  if (cfg.full_grid && cfg.command != "dims") throw UsageError("--full-grid applies to dims only");
  if (cfg.full_grid) cfg.T = std::vector<int>{};
  if (!cfg.T) cfg.T = default_T(cfg.command, cfg.p);
  const bool single_T = cfg.command == "basis" || cfg.command == "simulate" ||
                        cfg.command == "estimate" || cfg.command == "mc";
  if (single_T && cfg.T->size() != 1) throw UsageError(cfg.command + " needs exactly one T");
  for (int T : *cfg.T)
    if (T < 1 || T > kMaxHorizon) throw UsageError("T out of range: " + std::to_string(T));

  if (cfg.init == "all" && (needs_single_init(cfg.command))) cfg.init = std::string(cfg.p, '0');
  if (cfg.command == "stacked" || cfg.command == "lemma1") cfg.init = "0";
  if (cfg.init != "all") {
    try {
      if (bits_from_string(cfg.init).size() != static_cast<std::size_t>(cfg.p))
        throw UsageError("init must have p bits");
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  if (cfg.command == "basis" && cfg.covariates == "both") cfg.covariates = "beta0";

  if (cfg.trials == 0) cfg.trials = cfg.command == "lemma1" ? 100 : 3;
  if (cfg.gamma.empty()) cfg.gamma.assign(cfg.p, 0.5);
  if (cfg.gamma.size() != static_cast<std::size_t>(cfg.p))
    throw UsageError("gamma needs p values");
  if (!cfg.c.empty() && cfg.c.size() != static_cast<std::size_t>(cfg.p))
    throw UsageError("c needs p values");
  if (!cfg.b.empty() && (cfg.T->size() != 1 || cfg.b.size() != static_cast<std::size_t>(cfg.T->front())))
    throw UsageError("explicit b needs a single T and T values");
  if (cfg.sample_sizes.empty()) throw UsageError("mc needs at least one sample size");
  if (!(cfg.svd_threshold > 0.0 && cfg.svd_threshold < 1.0))
    throw UsageError("svd threshold must be in (0, 1)");
  parse_rationals(cfg.c);
  parse_rationals(cfg.b);
  parse_alpha(cfg.alpha);
  parse_init_scheme(cfg.init_scheme);
  return cfg;
}

json config_to_json(const RunConfig& c) {
  return json{{"command", c.command},
              {"p", c.p},
              {"T", c.T.value_or(std::vector<int>{})},
              {"init", c.init},
              {"covariates", c.covariates},
              {"full_grid", c.full_grid},
              {"c", c.c},
              {"b", c.b},
              {"gamma", c.gamma},
              {"beta", c.beta},
              {"seed", c.seed},
              {"format", c.format},
              {"trials", c.trials},
              {"n_fresh", c.n_fresh},
              {"selections", c.selections},
              {"x_draws", c.x_draws},
              {"reps", c.reps},
              {"N", c.N},
              {"sample_sizes", c.sample_sizes},
              {"alpha", c.alpha},
              {"init_scheme", c.init_scheme},
              {"svd_threshold", c.svd_threshold},
              {"lenient_svd", c.lenient_svd},
              {"check", c.check}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.p = j.at("p").get<int>();
    c.T = j.at("T").get<std::vector<int>>();
    c.init = j.at("init").get<std::string>();
    c.covariates = j.at("covariates").get<std::string>();
    c.full_grid = j.at("full_grid").get<bool>();
    c.c = j.at("c").get<std::vector<std::string>>();
    c.b = j.at("b").get<std::vector<std::string>>();
    c.gamma = j.at("gamma").get<std::vector<double>>();
    c.beta = j.at("beta").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.format = j.at("format").get<std::string>();
    c.trials = j.at("trials").get<std::size_t>();
    c.n_fresh = j.at("n_fresh").get<std::size_t>();
    c.selections = j.at("selections").get<std::size_t>();
    c.x_draws = j.at("x_draws").get<std::size_t>();
    c.reps = j.at("reps").get<std::size_t>();
    c.N = j.at("N").get<std::size_t>();
    c.sample_sizes = j.at("sample_sizes").get<std::vector<std::size_t>>();
    c.alpha = j.at("alpha").get<std::string>();
    c.init_scheme = j.at("init_scheme").get<std::string>();
    c.svd_threshold = j.at("svd_threshold").get<double>();
    c.lenient_svd = j.at("lenient_svd").get<bool>();
    c.check = j.at("check").get<bool>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config: ") + e.what());
  }
  return c;
}

Report execute(const RunConfig& cfg) {
  Report rep;
  rep.command = cfg.command;
  rep.config = config_to_json(cfg);
  rep.seed = cfg.seed;
  if (cfg.command == "rank") cmd_rank(cfg, rep);
  else if (cfg.command == "basis") cmd_basis(cfg, rep);
  else if (cfg.command == "dims") cmd_dims(cfg, rep);
  else if (cfg.command == "patterns") cmd_patterns(cfg, rep);
  else if (cfg.command == "stacked") cmd_stacked(cfg, rep);
  else if (cfg.command == "lemma1") cmd_lemma1(cfg, rep);
  else if (cfg.command == "poly") cmd_poly(cfg, rep);
  else if (cfg.command == "simulate") cmd_simulate(cfg, rep);
  else if (cfg.command == "estimate") cmd_estimate(cfg, rep);
  else if (cfg.command == "mc") cmd_mc(cfg, rep);
  else throw UsageError("unknown command '" + cfg.command + "'");
  return rep;
}

int run(const RunConfig& config, const std::string& out_path, std::ostream& log) {
  RunConfig cfg;
  try {
    cfg = resolve(config);
  } catch (const std::invalid_argument& e) {
    log << "usage error: " << e.what() << "\n";
    return 2;
  }
  Report rep;
  try {
    rep = execute(cfg);
  } catch (const std::invalid_argument& e) {
    log << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const gmm::Unidentified& e) {
    log << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }

  std::string path = out_path;
  if (path.empty()) {
    const char* dir = std::getenv("PLOGIT_OUT_DIR");
    path = dir && *dir ? (std::filesystem::path(dir) / (cfg.command + "." + cfg.format)).string()
                       : "-";
  }
  try {
    write_report(rep, parse_format(cfg.format), path);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
  for (const auto& f : rep.failures) log << "FAILED " << f << "\n";
  log << cfg.command << ": " << rep.rows.size() << " rows, "
      << (rep.asserted ? (rep.passed() ? "all checks passed" : "checks failed") : "no asserted checks")
      << (path == "-" ? "" : ", written to " + path) << "\n";
  return rep.passed() ? 0 : 1;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Exact moment-space certification and GMM for dynamic panel logit models", "plogit"};
  app.set_version_flag("--version", artifact_version());
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  std::string format;
  app.add_option("--config", config_path, "replay the config embedded in a JSON report");
  app.add_option("--out", out_path, "output file, '-' for stdout (default: $PLOGIT_OUT_DIR/<command>.<format> or stdout)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  RunConfig cfg;
  std::string T_text;
  std::string Ns_text;
  bool beta0 = false;
  bool generic = false;
  const std::vector<std::pair<std::string, std::string>> descriptions{
      {"rank", "alpha-span rank per cell, with diagonal-rescaling checks"},
      {"basis", "exact moment-function basis and fresh-draw validation"},
      {"dims", "moment-space dimension table"},
      {"patterns", "AR(2) dimension surplus under b_2 = ... = b_T"},
      {"stacked", "AR(1) ranks for one covariate vector and several stacked"},
      {"lemma1", "determinants of the 2T x 2T matrix and balanced column selections"},
      {"poly", "coefficient-matrix rank of the polynomial form"},
      {"simulate", "simulate a panel"},
      {"estimate", "simulate then estimate gamma by GMM"},
      {"mc", "Monte Carlo bias and RMSE of the GMM estimator"}};
  for (const auto& [name, desc] : descriptions) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--p", cfg.p, "lag order");
    sub->add_option("--T", T_text, "panel length: a..b, a,b,c or a");
    sub->add_option("--init", cfg.init, "initial history bits, y_0 first, or 'all'");
    sub->add_flag("--beta0", beta0, "no covariates (b = 1)");
    sub->add_flag("--generic", generic, "generic distinct covariate indices");
    sub->add_flag("--full-grid", cfg.full_grid, "dims: run the built-in grid");
    sub->add_option("--c", cfg.c, "exact lag coefficients as p/q");
    sub->add_option("--b", cfg.b, "exact covariate indices as p/q");
    sub->add_option("--gamma", cfg.gamma, "true lag coefficients for simulation");
    sub->add_option("--beta", cfg.beta, "true covariate coefficient for simulation");
    sub->add_option("--seed", cfg.seed, "base seed");
    sub->add_option("--trials", cfg.trials, "seeds per sampled rank, or lemma1 draw sets");
    sub->add_option("--n-fresh", cfg.n_fresh, "fresh draws for basis validation");
    sub->add_option("--selections", cfg.selections, "lemma1 balanced column selections");
    sub->add_option("--x-draws", cfg.x_draws, "stacked: covariate vectors");
    sub->add_option("--reps", cfg.reps, "Monte Carlo replications");
    sub->add_option("--N", cfg.N, "individuals");
    sub->add_option("--Ns", Ns_text, "mc sample sizes, comma separated");
    sub->add_option("--alpha", cfg.alpha, "normal:m:s, uniform:lo:hi or two_point:a:b:prob");
    sub->add_option("--init-scheme", cfg.init_scheme, "fixed or bernoulli:q");
    sub->add_option("--svd-threshold", cfg.svd_threshold, "relative singular-value cutoff");
    sub->add_flag("--lenient-svd", cfg.lenient_svd, "use the certified number of null directions");
    sub->add_flag("--check", cfg.check, "mc: assert bias and RMSE-ratio properties");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      if (!app.get_subcommands().empty())
        throw UsageError("--config replays a report; do not combine it with a subcommand");
      auto replay = config_from_json(read_report_file(config_path).at("config"));
      if (!format.empty()) replay.format = format;
      return run(replay, out_path, std::cerr);
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    if (!T_text.empty()) cfg.T = parse_range(T_text);
    if (!Ns_text.empty()) {
      cfg.sample_sizes.clear();
      for (int n : parse_range(Ns_text)) {
        if (n < 1) throw UsageError("sample sizes must be positive");
        cfg.sample_sizes.push_back(static_cast<std::size_t>(n));
      }
    }
    if (beta0 && generic) cfg.covariates = "both";
    else if (beta0) cfg.covariates = "beta0";
    else if (generic) cfg.covariates = "generic";
    if (!format.empty()) cfg.format = format;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  return run(cfg, out_path, std::cerr);
}

}  // namespace plogit::cli
