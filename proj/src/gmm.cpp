#include "plogit/gmm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <thread>

namespace plogit::gmm {

void AlphaDistribution::validate() const {
  switch (kind) {
    case Kind::normal:
      if (!(b >= 0.0)) throw std::invalid_argument("normal alpha: sd must be >= 0");
      break;
    case Kind::uniform:
      if (!(a <= b)) throw std::invalid_argument("uniform alpha: need lo <= hi");
      break;
    case Kind::two_point:
      if (!(prob >= 0.0 && prob <= 1.0))
        throw std::invalid_argument("two-point alpha: probability must be in [0, 1]");
      break;
  }
}

double AlphaDistribution::draw(Rng& rng) const {
  switch (kind) {
    case Kind::normal: {
      if (b == 0.0) return a;
      std::normal_distribution<double> dist(a, b);
      return dist(rng);
    }
    case Kind::uniform: {
      std::uniform_real_distribution<double> dist(a, b);
      return dist(rng);
    }
    case Kind::two_point: {
      std::bernoulli_distribution first(prob);
      return first(rng) ? a : b;
    }
  }
  return a;
}

void SimConfig::validate() const {
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  spec.validate();
  if (true_gamma.size() != static_cast<std::size_t>(spec.p))
    throw std::invalid_argument("true_gamma must have length p");
  alpha.validate();
  if (init.kind == InitScheme::Kind::bernoulli && !(init.q >= 0.0 && init.q <= 1.0))
    throw std::invalid_argument("init probability must be in [0, 1]");
  if (x.kind == XScheme::Kind::iid_normal && !(x.sd >= 0.0))
    throw std::invalid_argument("covariate sd must be >= 0");
}

PanelDataset simulate_panel(const SimConfig& cfg) {
  cfg.validate();
  const int T = cfg.spec.T;
  const int p = cfg.spec.p;
  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::bernoulli_distribution init_draw(cfg.init.q);
  std::normal_distribution<double> x_draw(0.0, cfg.x.sd > 0.0 ? cfg.x.sd : 1.0);

  PanelDataset data{p, T, {}};
  data.individuals.reserve(cfg.N);
  for (std::size_t i = 0; i < cfg.N; ++i) {
    Individual ind;
    const double alpha = cfg.alpha.draw(rng);
    if (cfg.init.kind == InitScheme::Kind::fixed) {
      ind.init = cfg.spec.init;
    } else {
      for (int l = 0; l < p; ++l) ind.init.push_back(init_draw(rng) ? 1 : 0);
    }
    if (cfg.x.kind == XScheme::Kind::iid_normal) {
      for (int t = 0; t < T; ++t)
        ind.x_index.push_back(cfg.x.sd > 0.0 ? cfg.true_beta * x_draw(rng) : 0.0);
    }
    // history[0] = y_{1-p}, ..., history[p-1] = y_0, then y_1..y_T
    std::vector<int> path(ind.init.rbegin(), ind.init.rend());
    for (int t = 1; t <= T; ++t) {
      double z = alpha + (ind.x_index.empty() ? 0.0 : ind.x_index[static_cast<std::size_t>(t - 1)]);
      for (int l = 1; l <= p; ++l)
        if (path[path.size() - static_cast<std::size_t>(l)]) z += cfg.true_gamma[static_cast<std::size_t>(l - 1)];
      const double prob = 1.0 / (1.0 + std::exp(-z));
      path.push_back(unif(rng) < prob ? 1 : 0);
    }
    ind.y = Outcome(std::vector<int>(path.begin() + p, path.end()));
    data.individuals.push_back(std::move(ind));
  }
  return data;
}

std::size_t certified_dimension(const ModelSpec& spec, bool has_covariates) {
  const long full = static_cast<long>(spec.outcome_count());
  const long T = spec.T;
  long rank = 0;
  switch (spec.p) {
    case 0: rank = T + 1; break;
    case 1: rank = 2 * T; break;
    case 2: rank = has_covariates ? 4 * (T - 1) : 3 * T - 2; break;
    default: throw std::invalid_argument("no certified dimension for this lag order");
  }
  return static_cast<std::size_t>(std::max(0L, full - rank));
}

namespace {

bool varies(std::span<const double> x) {
  return !x.empty() && std::any_of(x.begin(), x.end(), [&](double v) { return v != x[0]; });
}

}  // namespace

std::vector<double> default_ladder(const ModelSpec& spec, bool has_covariates) {
  const std::size_t rank = spec.outcome_count() - certified_dimension(spec, has_covariates);
  const std::size_t n = std::max<std::size_t>(2, 2 * rank);
  std::vector<double> ladder(n);
  for (std::size_t k = 0; k < n; ++k)
    ladder[k] = -4.0 + 8.0 * static_cast<double>(k) / static_cast<double>(n - 1);
  return ladder;
}

Eigen::MatrixXd canonical_columns(const Eigen::MatrixXd& b, double tol) {
  Eigen::MatrixXd m = b.transpose();
  const double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) return Eigen::MatrixXd(b.rows(), 0);
  Eigen::Index r = 0;
  for (Eigen::Index j = 0; j < m.cols() && r < m.rows(); ++j) {
    Eigen::Index k = r;
    m.col(j).segment(r, m.rows() - r).cwiseAbs().maxCoeff(&k);
    k += r;
    if (std::abs(m(k, j)) <= tol * scale) continue;
    m.row(r).swap(m.row(k));
    m.row(r) /= m(r, j);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != r && m(i, j) != 0.0) m.row(i) -= m(i, j) * m.row(r);
    }
    m(r, j) = 1.0;
    ++r;
  }
  return m.topRows(r).transpose();
}

Eigen::MatrixXd float_moment_basis(const ModelSpec& spec, std::span<const double> gamma,
                                   std::span<const double> x_index,
                                   const FloatBasisOptions& options) {
  spec.validate();
  if (spec.p != 1 && spec.p != 2)
    throw std::invalid_argument("float_moment_basis supports p = 1 and p = 2");
  const bool has_cov = varies(x_index);
  const std::size_t expected = options.expected_dim.value_or(certified_dimension(spec, has_cov));
  const std::vector<double> ladder =
      options.ladder.empty() ? default_ladder(spec, has_cov) : options.ladder;

  const auto n = static_cast<Eigen::Index>(spec.outcome_count());
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(ladder.size()), n);
  for (Eigen::Index h = 0; h < n; ++h) {
    const Outcome y = index_outcome(static_cast<std::size_t>(h + 1), spec.T);
    for (std::size_t g = 0; g < ladder.size(); ++g)
      rows(static_cast<Eigen::Index>(g), h) = prob_float(y, spec, ladder[g], gamma, x_index);
  }
  for (Eigen::Index i = 0; i < rows.size(); ++i)
    if (!std::isfinite(rows.data()[i])) throw std::runtime_error("non-finite outcome probability");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double cutoff = options.relative_threshold * (sigma.size() ? sigma(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff) ++rank;
  if (!options.strict) rank = n - static_cast<Eigen::Index>(expected);
  const auto d = static_cast<std::size_t>(n - rank);
  if (d != expected)
    throw DimensionMismatch("numerical nullspace has dimension " + std::to_string(d) +
                            ", certified dimension is " + std::to_string(expected));
  if (d == 0) return Eigen::MatrixXd(n, 0);
  // Null vectors carry errors of order eps * sigma_max / sigma_min(nonzero);
  // pivots below that are structural zeros.
  // In lenient mode rank can exceed the numerical rank; use the last value above the cutoff.
  Eigen::Index above = 0;
  while (above < std::min(rank, sigma.size()) && sigma(above) > cutoff) ++above;
  const double smallest = above > 0 ? sigma(above - 1) : sigma(0);
  const double noise = 1e3 * std::numeric_limits<double>::epsilon() * sigma(0) / smallest;
  return canonical_columns(svd.matrixV().rightCols(n - rank), std::max(1e-10, noise));
}

bool degenerate_gamma(std::span<const double> gamma, double tol) {
  const std::size_t k = gamma.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    double sum = 0.0;
    for (std::size_t l = 0; l < k; ++l)
      if (mask >> l & 1) sum += gamma[l];
    if (std::abs(sum) <= tol) return true;
  }
  return false;
}

GmmObjective::GmmObjective(const PanelDataset& data, const SearchOptions& search)
    : p_(data.p), T_(data.T), n_(static_cast<double>(data.individuals.size())), search_(search) {
  if (data.individuals.empty()) throw std::invalid_argument("empty dataset");
  std::map<std::vector<int>, std::vector<double>> groups;
  const std::size_t outcomes = std::size_t{1} << T_;
  for (const auto& ind : data.individuals) {
    if (varies(ind.x_index) || (!ind.x_index.empty() && ind.x_index[0] != 0.0))
      throw std::invalid_argument("GMM estimation with covariates is not supported");
    auto& counts = groups[ind.init];
    if (counts.empty()) counts.assign(outcomes, 0.0);
    counts[outcome_index(ind.y) - 1] += 1.0;
  }
  for (auto& [history, counts] : groups) {
    histories_.push_back(history);
    counts_.push_back(std::move(counts));
  }
}

FloatBasisOptions GmmObjective::basis_options(std::span<const double> gamma) const {
  FloatBasisOptions opts;
  opts.relative_threshold = search_.svd_threshold;
  // Close to a degenerate gamma the extra singular values shrink towards zero
  // and no fixed cutoff separates them.
  opts.strict = search_.strict_dimension && !degenerate_gamma(gamma, kNearDegenerate);
  return opts;
}

double GmmObjective::operator()(std::span<const double> gamma) const {
  double q = 0.0;
  for (std::size_t k = 0; k < histories_.size(); ++k) {
    const ModelSpec spec{p_, T_, histories_[k]};
    const Eigen::MatrixXd basis = float_moment_basis(spec, gamma, {}, basis_options(gamma));
    const Eigen::Map<const Eigen::VectorXd> counts(counts_[k].data(),
                                                   static_cast<Eigen::Index>(counts_[k].size()));
    const Eigen::VectorXd gbar = basis.transpose() * counts / n_;
    q += gbar.squaredNorm();
  }
  return q;
}

std::size_t GmmObjective::moment_count(std::span<const double> gamma) const {
  std::size_t m = 0;
  for (const auto& h : histories_)
    m += static_cast<std::size_t>(
        float_moment_basis(ModelSpec{p_, T_, h}, gamma, {}, basis_options(gamma)).cols());
  return m;
}

namespace {

struct Minimum {
  double x;
  double f;
  bool converged;
};

template <typename F>
Minimum golden_section(F&& f, double lo, double hi, double tol, std::size_t& evals) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
  double f1 = f(x1), f2 = f(x2);
  evals += 2;
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = f(x2);
    }
    ++evals;
  }
  return f1 <= f2 ? Minimum{x1, f1, (b - a) <= tol} : Minimum{x2, f2, (b - a) <= tol};
}

std::vector<double> grid_points(const SearchOptions& s) {
  if (!(s.grid_step > 0.0) || !(s.grid_hi > s.grid_lo))
    throw std::invalid_argument("search grid must have lo < hi and a positive step");
  const auto k = static_cast<std::size_t>(std::llround((s.grid_hi - s.grid_lo) / s.grid_step));
  std::vector<double> pts(k + 1);
  for (std::size_t i = 0; i <= k; ++i) pts[i] = s.grid_lo + static_cast<double>(i) * s.grid_step;
  return pts;
}

// Degenerate gamma (a lag subset summing to zero) is skipped by the search.
constexpr double kSkip = std::numeric_limits<double>::infinity();

double checked(double v) {
  if (!std::isfinite(v)) throw std::runtime_error("non-finite GMM objective");
  return v;
}

}  // namespace

EstimateResult estimate_gmm(const PanelDataset& data, const SearchOptions& search) {
  if (data.p != 1 && data.p != 2) throw std::invalid_argument("GMM estimation supports p = 1 and p = 2");
  const GmmObjective objective(data, search);
  const std::vector<double> grid = grid_points(search);
  EstimateResult result;

  std::vector<double> probe(static_cast<std::size_t>(data.p), grid.front());
  if (objective.moment_count(probe) < static_cast<std::size_t>(data.p))
    throw Unidentified("fewer moment functions than parameters");

  if (data.p == 1) {
    auto q = [&](double g) {
      if (degenerate_gamma(std::span<const double>(&g, 1))) return kSkip;
      return checked(objective(std::span<const double>(&g, 1)));
    };
    std::size_t best = 0;
    double best_f = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double f = q(grid[i]);
      if (f < best_f) {
        best_f = f;
        best = i;
      }
    }
    result.evaluations = grid.size();
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    const Minimum m = golden_section(q, lo, hi, search.refine_tol, result.evaluations);
    const bool interior = best > 0 && best + 1 < grid.size();
    if (m.f <= best_f) {
      result.gamma_hat = {m.x};
      result.objective_value = m.f;
    } else {
      result.gamma_hat = {grid[best]};
      result.objective_value = best_f;
    }
    result.converged = interior && m.converged;
    return result;
  }

  // p = 2: 2-D grid, then alternating golden-section refinement
  std::vector<double> g(2);
  auto q2 = [&](double a, double b) {
    const double v[2] = {a, b};
    if (degenerate_gamma(v)) return kSkip;
    return checked(objective(std::span<const double>(v, 2)));
  };
  double best_f = std::numeric_limits<double>::infinity();
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double f = q2(grid[i], grid[j]);
      if (f < best_f) {
        best_f = f;
        bi = i;
        bj = j;
      }
    }
  }
  result.evaluations = grid.size() * grid.size();
  g = {grid[bi], grid[bj]};
  const bool interior = bi > 0 && bj > 0 && bi + 1 < grid.size() && bj + 1 < grid.size();
  double width = search.grid_step;
  bool settled = false;
  for (int sweep = 0; sweep < 50 && !settled; ++sweep) {
    const std::vector<double> before = g;
    for (std::size_t coord = 0; coord < 2; ++coord) {
      auto line = [&](double v) { return coord == 0 ? q2(v, g[1]) : q2(g[0], v); };
      const Minimum m = golden_section(line, g[coord] - width, g[coord] + width,
                                       search.refine_tol, result.evaluations);
      if (m.f <= best_f) {
        best_f = m.f;
        g[coord] = m.x;
      }
    }
    settled = std::abs(g[0] - before[0]) <= search.refine_tol &&
              std::abs(g[1] - before[1]) <= search.refine_tol;
    width = std::max(search.refine_tol * 10.0, width * 0.5);
  }
  result.gamma_hat = g;
  result.objective_value = best_f;
  result.converged = interior && settled;
  return result;
}

double coverage_fraction(std::span<const double> estimates, double truth, double k) {
  if (estimates.size() < 2) throw std::invalid_argument("coverage needs at least two estimates");
  const double n = static_cast<double>(estimates.size());
  const double mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / n;
  double ss = 0.0;
  for (double e : estimates) ss += (e - mean) * (e - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const auto covered = std::count_if(estimates.begin(), estimates.end(),
                                     [&](double e) { return std::abs(e - truth) <= k * sd; });
  return static_cast<double>(covered) / n;
}

McSummary monte_carlo(const SimConfig& cfg, std::size_t reps, const SearchOptions& search,
                      std::span<const std::size_t> sample_sizes, unsigned threads) {
  if (reps < 2) throw std::invalid_argument("Monte Carlo needs at least two replications");
  cfg.validate();
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  McSummary summary;
  for (const std::size_t N : sample_sizes) {
    std::vector<std::optional<double>> estimates(reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t r = next++; r < reps; r = next++) {
        SimConfig rep = cfg;
        rep.N = N;
        rep.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(N), r});
        try {
          const EstimateResult est = estimate_gmm(simulate_panel(rep), search);
          if (est.converged) estimates[r] = est.gamma_hat.front();
        } catch (const std::exception&) {
          // counted as a failure below
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    McRow row;
    row.N = N;
    row.T = cfg.spec.T;
    row.p = cfg.spec.p;
    row.gamma_true = cfg.true_gamma.front();
    row.reps = reps;
    row.seed = cfg.seed;
    for (const auto& e : estimates) {
      if (e)
        row.estimates.push_back(*e);
      else
        ++row.failures;
    }
    if (!row.estimates.empty()) {
      std::vector<double> bias;
      for (double e : row.estimates) bias.push_back(e - row.gamma_true);
      const double n = static_cast<double>(bias.size());
      row.mean_bias = std::accumulate(bias.begin(), bias.end(), 0.0) / n;
      double ss = 0.0, sq = 0.0;
      for (double v : bias) {
        sq += v * v;
        ss += (v - row.mean_bias) * (v - row.mean_bias);
      }
      row.rmse = std::sqrt(sq / n);
      row.sd = bias.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      std::sort(bias.begin(), bias.end());
      const std::size_t mid = bias.size() / 2;
      row.median_bias = bias.size() % 2 ? bias[mid] : 0.5 * (bias[mid - 1] + bias[mid]);
    } else {
      row.mean_bias = row.median_bias = row.rmse = row.sd = std::numeric_limits<double>::quiet_NaN();
    }
    summary.rows.push_back(std::move(row));
  }
  if (summary.rows.size() >= 2 && summary.rows.back().rmse > 0.0)
    summary.rmse_ratio = summary.rows.front().rmse / summary.rows.back().rmse;
  return summary;
}

}  // namespace plogit::gmm
