#pragma once

#include "plogit/model.hpp"
#include "plogit/random.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace plogit::gmm {

struct AlphaDistribution {
  enum class Kind { normal, uniform, two_point };
  Kind kind = Kind::normal;
  double a = 0.0;     // mean | lo | first point
  double b = 1.0;     // sd   | hi | second point
  double prob = 0.5;  // P(first point) for two_point

  static AlphaDistribution normal(double mean, double sd) { return {Kind::normal, mean, sd, 0.5}; }
  static AlphaDistribution uniform(double lo, double hi) { return {Kind::uniform, lo, hi, 0.5}; }
  static AlphaDistribution two_point(double a, double b, double prob) {
    return {Kind::two_point, a, b, prob};
  }

  void validate() const;
  double draw(Rng& rng) const;
};

struct InitScheme {
  enum class Kind { fixed, bernoulli };
  Kind kind = Kind::fixed;
  double q = 0.5;  // P(y = 1) for each history entry under bernoulli
};

struct XScheme {
  enum class Kind { none, iid_normal };
  Kind kind = Kind::none;
  double sd = 1.0;
};

struct SimConfig {
  std::size_t N = 1000;
  ModelSpec spec{1, 3, {0}};  // spec.init is the history under a fixed init scheme
  std::vector<double> true_gamma{0.5};
  double true_beta = 0.0;
  AlphaDistribution alpha = AlphaDistribution::normal(0.0, 1.0);
  InitScheme init;
  XScheme x;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Individual {
  std::vector<int> init;
  std::vector<double> x_index;  // x_t' beta per period; empty without covariates
  Outcome y;
};

struct PanelDataset {
  int p = 1;
  int T = 3;
  std::vector<Individual> individuals;
};

/// Sequential Bernoulli draws from the logistic hazard; deterministic given
/// cfg.seed.
PanelDataset simulate_panel(const SimConfig& cfg);

/// Raised when the numerical nullspace dimension disagrees with the exact one.
class DimensionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when there are fewer moment functions than parameters.
class Unidentified : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Certified moment-space dimension: 2^T - 2T (p = 1), 2^T - (3T-2)
/// (p = 2 without covariates), 2^T - 4(T-1) (p = 2 with covariates),
/// 2^T - (T+1) (p = 0).
std::size_t certified_dimension(const ModelSpec& spec, bool has_covariates);

struct FloatBasisOptions {
  std::vector<double> ladder;         // alpha nodes; empty selects the default ladder
  double relative_threshold = 1e-9;   // singular values below this * sigma_max are null
  std::optional<std::size_t> expected_dim;
  /// When false, the expected number of smallest singular directions is
  /// returned without the dimension check (used at degenerate gamma).
  bool strict = true;
};

/// True when a nonempty subset of gamma sums to zero within tol, where the
/// model collapses to a lower lag order and the nullspace grows.
bool degenerate_gamma(std::span<const double> gamma, double tol = 1e-9);

/// Within this distance of a degenerate gamma the GMM objective takes the
/// certified number of null directions instead of checking the dimension.
inline constexpr double kNearDegenerate = 1e-2;

/// 2 * expected rank nodes equally spaced in [-4, 4].
std::vector<double> default_ladder(const ModelSpec& spec, bool has_covariates);

/// Numerical nullspace of probability rows over the alpha ladder, in reduced
/// column echelon form. Rows are outcomes (row h-1 is outcome h). Throws
/// DimensionMismatch when the dimension disagrees with the certified one.
Eigen::MatrixXd float_moment_basis(const ModelSpec& spec, std::span<const double> gamma,
                                   std::span<const double> x_index,
                                   const FloatBasisOptions& options = {});

/// Reduced column echelon form of the column space of b (pivots on the
/// lowest rows, pivot entries 1).
Eigen::MatrixXd canonical_columns(const Eigen::MatrixXd& b, double tol = 1e-10);

struct SearchOptions {
  double grid_lo = -2.0;
  double grid_hi = 3.0;
  double grid_step = 0.05;
  double refine_tol = 1e-6;
  double svd_threshold = 1e-9;   // relative cutoff for the moment nullspace
  bool strict_dimension = true;  // false: take the certified count of directions
};

struct EstimateResult {
  std::vector<double> gamma_hat;
  double objective_value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// First-step GMM objective Q = gbar' gbar with one block of moments per
/// initial history.
class GmmObjective {
 public:
  explicit GmmObjective(const PanelDataset& data, const SearchOptions& search = {});
  double operator()(std::span<const double> gamma) const;
  std::size_t moment_count(std::span<const double> gamma) const;

 private:
  FloatBasisOptions basis_options(std::span<const double> gamma) const;

  int p_;
  int T_;
  double n_;
  SearchOptions search_;
  std::vector<std::vector<int>> histories_;
  std::vector<std::vector<double>> counts_;  // per history, per outcome
};

/// Grid search then golden-section refinement (p = 1), or a 2-D grid with
/// coordinate refinement (p = 2, experimental). Data must have no covariates.
EstimateResult estimate_gmm(const PanelDataset& data, const SearchOptions& search = {});

struct McRow {
  std::size_t N = 0;
  int T = 0;
  int p = 0;
  double gamma_true = 0.0;
  std::size_t reps = 0;
  double mean_bias = 0.0;
  double median_bias = 0.0;
  double rmse = 0.0;
  double sd = 0.0;
  std::size_t failures = 0;
  std::uint64_t seed = 0;
  std::vector<double> estimates;  // first gamma component of each successful rep
};

struct McSummary {
  std::vector<McRow> rows;
  /// rmse(first N) / rmse(last N) when at least two sample sizes ran.
  std::optional<double> rmse_ratio;
};

/// Independent simulate + estimate cycles per sample size; each replication
/// draws from derive_seed(cfg.seed, {N, r}). Failed or non-converged
/// replications are counted, not averaged.
McSummary monte_carlo(const SimConfig& cfg, std::size_t reps, const SearchOptions& search,
                      std::span<const std::size_t> sample_sizes, unsigned threads = 0);

/// Share of estimates within k standard deviations (across estimates) of
/// the truth.
double coverage_fraction(std::span<const double> estimates, double truth, double k = 2.0);

}  // namespace plogit::gmm
