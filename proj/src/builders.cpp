#include "plogit/builders.hpp"

#include "plogit/exact_linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace plogit {

void AlphaDraws::validate() const {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] <= 0) throw std::invalid_argument("alpha draws must be positive in exp form");
    for (std::size_t j = 0; j < i; ++j)
      if (u[i] == u[j]) throw std::invalid_argument("duplicate alpha draw u = " + to_string(u[i]));
  }
}

AlphaDraws draw_alpha(std::size_t n, std::uint64_t seed, std::span<const Rational> exclude) {
  Rng rng(seed);
  return AlphaDraws{draw_distinct(rng, n, exclude), seed};
}

std::string_view to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::pbar: return "Pbar";
    case MatrixKind::pbreve: return "Pbreve";
    case MatrixKind::pddot: return "Pddot";
    case MatrixKind::ptilde: return "Ptilde";
  }
  return "unknown";
}

namespace {

void check_common(const ModelSpec& spec, std::span<const Rational> c,
                  std::span<const Rational> b, const AlphaDraws& draws) {
  spec.validate();
  draws.validate();
  if (c.size() != static_cast<std::size_t>(spec.p))
    throw std::invalid_argument("c must have length p");
  if (b.size() != static_cast<std::size_t>(spec.T))
    throw std::invalid_argument("b must have length T");
  for (const auto& v : c)
    if (v <= 0) throw std::invalid_argument("c entries must be positive");
  for (const auto& v : b)
    if (v <= 0) throw std::invalid_argument("b entries must be positive");
}

std::vector<std::size_t> all_indices(const ModelSpec& spec) {
  std::vector<std::size_t> map(spec.outcome_count());
  std::iota(map.begin(), map.end(), std::size_t{1});
  return map;
}

template <typename Entry>
BuiltMatrix fill(MatrixKind kind, const ModelSpec& spec, const AlphaDraws& draws,
                 std::vector<std::size_t> map, Entry entry) {
  BuiltMatrix out{kind, spec, RationalMatrix(draws.size(), map.size()), std::move(map)};
  for (std::size_t j = 0; j < out.column_index_map.size(); ++j) {
    const Outcome y = index_outcome(out.column_index_map[j], spec.T);
    for (std::size_t g = 0; g < draws.size(); ++g) out.matrix(g, j) = entry(y, draws.u[g]);
  }
  return out;
}

}  // namespace

BuiltMatrix build_pbar(const ModelSpec& spec, std::span<const Rational> c,
                       std::span<const Rational> b, const AlphaDraws& draws) {
  check_common(spec, c, b, draws);
  ExpParams params{Rational(1), {c.begin(), c.end()}, {b.begin(), b.end()}};
  return fill(MatrixKind::pbar, spec, draws, all_indices(spec),
              [&](const Outcome& y, const Rational& u) {
                params.u = u;
                return prob_general(y, spec, params);
              });
}

BuiltMatrix build_pbreve(const ModelSpec& spec, const AlphaDraws& draws,
                         std::span<const Rational> c, std::span<const Rational> b) {
  check_common(spec, c, b, draws);
  if (spec.p == 1) {
    return fill(MatrixKind::pbreve, spec, draws, all_indices(spec),
                [&](const Outcome& y, const Rational& u) {
                  const int T = spec.T;
                  Rational v = y.y(T) ? Rational(b[T - 1] * u) : Rational(1);
                  for (int t = 1; t < T; ++t) {
                    if (!y.y(t)) continue;
                    const Rational next = b[t] * u;
                    v *= b[t - 1] * u * (1 + next) / (1 + next * c[0]);
                  }
                  return v;
                });
  }
  if (spec.p == 2) {
    return fill(MatrixKind::pbreve, spec, draws, all_indices(spec),
                [&](const Outcome& y, const Rational& u) {
                  Rational v(1);
                  for (int t = 1; t <= spec.T; ++t) {
                    const Rational P = b[t - 1] * u;
                    if (y.y(t)) v *= P;
                    if (t == 1) continue;
                    Rational m(1);
                    if (lagged(y, spec, t, 1)) m *= c[0];
                    if (lagged(y, spec, t, 2)) m *= c[1];
                    if (m != 1) v *= (1 + P) / (1 + P * m);
                  }
                  return v;
                });
  }
  throw std::invalid_argument("Pbreve is defined for p = 1 and p = 2 only");
}

BuiltMatrix build_pbreve_ar2_grouped(const ModelSpec& spec, const AlphaDraws& draws,
                                     std::span<const Rational> c, std::span<const Rational> b) {
  check_common(spec, c, b, draws);
  if (spec.p != 2) throw std::invalid_argument("grouped AR(2) form requires p = 2");
  const Rational c12 = c[0] * c[1];
  return fill(MatrixKind::pbreve, spec, draws, all_indices(spec),
              [&](const Outcome& y, const Rational& u) {
                const int T = spec.T;
                auto P = [&](int t) { return Rational(b[t - 1] * u); };
                auto yy = [&](int t) { return t >= 1 ? y.y(t) : spec.init[0]; };
                Rational v = y.y(T) ? P(T) : Rational(1);
                for (int t = 2; t <= T - 1; ++t) {
                  if (!yy(t - 1)) continue;
                  Rational f = P(t - 1);
                  if (yy(t - 2) == 0)
                    f *= (1 + P(t)) * (1 + P(t + 1)) / ((1 + P(t) * c[0]) * (1 + P(t + 1) * c[1]));
                  else
                    f *= (1 + P(t)) / (1 + P(t) * c12);
                  v *= f;
                }
                if (yy(T - 1)) {
                  Rational f = P(T - 1);
                  if (yy(T - 2) == 0)
                    f *= (1 + P(T)) / (1 + P(T) * c[0]);
                  else
                    f *= (1 + P(T)) / (1 + P(T) * c12);
                  v *= f;
                }
                return v;
              });
}

RationalMatrix elementwise_ratio(const BuiltMatrix& pbar, const BuiltMatrix& pbreve) {
  if (pbar.matrix.rows() != pbreve.matrix.rows() || pbar.matrix.cols() != pbreve.matrix.cols() ||
      pbar.column_index_map != pbreve.column_index_map || !(pbar.spec == pbreve.spec))
    throw std::invalid_argument("ratio check needs matrices built on the same spec and draws");
  RationalMatrix r(pbar.matrix.rows(), pbar.matrix.cols());
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t j = 0; j < r.cols(); ++j) {
      if (pbar.matrix(i, j) == 0) throw std::logic_error("zero outcome probability");
      r(i, j) = pbreve.matrix(i, j) / pbar.matrix(i, j);
    }
  }
  return r;
}

bool ratio_rank1_check(const BuiltMatrix& pbar, const BuiltMatrix& pbreve) {
  return linalg::rank(elementwise_ratio(pbar, pbreve)) <= 1;
}

bool shared_column_factor(const RationalMatrix& ratio_a, const RationalMatrix& ratio_b) {
  if (ratio_a.cols() != ratio_b.cols())
    throw std::invalid_argument("ratio matrices must have the same columns");
  RationalMatrix stacked = ratio_a;
  stacked.append_rows(ratio_b);
  return linalg::rank(stacked) <= 1;
}

BuiltMatrix build_pddot(const ModelSpec& spec, const AlphaDraws& draws,
                        std::span<const Rational> c, std::span<const Rational> b) {
  check_common(spec, c, b, draws);
  if (std::any_of(b.begin(), b.end(), [](const Rational& v) { return v != 1; }))
    throw std::invalid_argument("Pddot is defined for the model without covariates (b = 1)");
  if (spec.p == 1) {
    return fill(MatrixKind::pddot, spec, draws, all_indices(spec),
                [&](const Outcome& y, const Rational& P) {
                  const Rational lead = 1 + P * c[0];
                  Rational v = pow(lead, static_cast<unsigned>(spec.T - 1)) *
                               pow(P, static_cast<unsigned>(y.sum()));
                  for (int t = 1; t < spec.T; ++t)
                    if (y.y(t)) v *= (1 + P) / lead;
                  return v;
                });
  }
  if (spec.p == 2) {
    const int T = spec.T;
    const bool y0 = spec.init[0] == 1;
    const unsigned e1 = static_cast<unsigned>(y0 ? (T - 1) / 2 : T / 2);
    const unsigned e2 = static_cast<unsigned>(y0 ? (T - 2) / 2 : (T - 1) / 2);
    const unsigned e12 = static_cast<unsigned>(y0 ? T - 1 : T - 2);
    const Rational c12 = c[0] * c[1];
    return fill(MatrixKind::pddot, spec, draws, all_indices(spec),
                [&](const Outcome& y, const Rational& P) {
                  auto yy = [&](int t) { return t >= 1 ? y.y(t) : spec.init[0]; };
                  const Rational d1 = 1 + P * c[0], d2 = 1 + P * c[1], d12 = 1 + P * c12;
                  Rational v = pow(d1, e1) * pow(d2, e2) * pow(d12, e12) *
                               pow(P, static_cast<unsigned>(y.sum()));
                  if (yy(T - 1)) v *= (1 + P) / (yy(T - 2) ? d12 : d1);
                  for (int t = 2; t <= T - 1; ++t) {
                    if (!yy(t - 1)) continue;
                    if (yy(t - 2))
                      v *= (1 + P) / d12;
                    else
                      v *= (1 + P) * (1 + P) / (d1 * d2);
                  }
                  return v;
                });
  }
  throw std::invalid_argument("Pddot is defined for p = 1 and p = 2 only");
}

std::vector<std::size_t> lemma1_columns(int T) {
  if (T < 2 || T > kMaxHorizon) throw std::invalid_argument("lemma1_columns: T out of range");
  std::vector<std::size_t> cols;
  cols.reserve(static_cast<std::size_t>(2 * T));
  for (int k = 0; k < T; ++k) {
    std::vector<int> first(static_cast<std::size_t>(T), 0), last(static_cast<std::size_t>(T), 0);
    for (int t = 0; t < k; ++t) first[static_cast<std::size_t>(t)] = 1;
    for (int t = T - k - 1; t < T; ++t) last[static_cast<std::size_t>(t)] = 1;
    cols.push_back(outcome_index(Outcome(first)));
    cols.push_back(outcome_index(Outcome(last)));
  }
  return cols;
}

BuiltMatrix build_ptilde(int T, const AlphaDraws& draws, const Rational& c) {
  if (T < 2 || T > kMaxHorizon) throw std::invalid_argument("build_ptilde: T out of range");
  if (draws.size() != static_cast<std::size_t>(2 * T))
    throw std::invalid_argument("build_ptilde needs exactly 2T alpha draws");
  draws.validate();
  if (c <= 0) throw std::invalid_argument("c must be positive");
  BuiltMatrix out{MatrixKind::ptilde, ModelSpec{1, T, {0}},
                  RationalMatrix(draws.size(), static_cast<std::size_t>(2 * T)), lemma1_columns(T)};
  for (std::size_t g = 0; g < draws.size(); ++g) {
    const Rational& u = draws.u[g];
    const Rational step = u * (1 + u) / (1 + c * u);
    Rational power(1);
    for (int k = 0; k < T; ++k) {
      out.matrix(g, static_cast<std::size_t>(2 * k)) = power;
      out.matrix(g, static_cast<std::size_t>(2 * k + 1)) = u * power;
      power *= step;
    }
  }
  return out;
}

std::vector<std::size_t> balanced_selection(int T, Rng& rng) {
  if (T < 2 || T > kMaxHorizon) throw std::invalid_argument("balanced_selection: T out of range");
  const std::size_t n = std::size_t{1} << T;
  std::vector<std::size_t> picks{1, n};
  for (int k = 1; k < T; ++k) {
    for (int last : {0, 1}) {
      std::vector<std::size_t> pool;
      for (std::size_t h = 1; h <= n; ++h) {
        const Outcome y = index_outcome(h, T);
        if (y.sum() == k && y.y(T) == last) pool.push_back(h);
      }
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      picks.push_back(pool[pick(rng)]);
    }
  }
  return picks;
}

}  // namespace plogit
