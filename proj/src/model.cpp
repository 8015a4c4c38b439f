#include "plogit/model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace plogit {

void ModelSpec::validate() const {
  if (p < 0 || p > 3) throw std::invalid_argument("lag order p must be in 0..3");
  if (T < 2 || T > kMaxHorizon)
    throw std::invalid_argument("horizon T must be in 2.." + std::to_string(kMaxHorizon));
  if (init.size() != static_cast<std::size_t>(p))
    throw std::invalid_argument("initial history must have length p");
  for (int v : init)
    if (v != 0 && v != 1) throw std::invalid_argument("initial history entries must be 0 or 1");
}

void ExpParams::validate(const ModelSpec& spec) const {
  if (u <= 0) throw std::invalid_argument("u must be positive");
  if (c.size() != static_cast<std::size_t>(spec.p))
    throw std::invalid_argument("c must have length p");
  if (b.size() != static_cast<std::size_t>(spec.T))
    throw std::invalid_argument("b must have length T");
  for (const auto& v : c)
    if (v <= 0) throw std::invalid_argument("c entries must be positive");
  for (const auto& v : b)
    if (v <= 0) throw std::invalid_argument("b entries must be positive");
}

Outcome::Outcome(std::vector<int> y) : y_(std::move(y)) {
  for (int v : y_)
    if (v != 0 && v != 1) throw std::invalid_argument("outcome entries must be 0 or 1");
}

int Outcome::sum() const { return std::accumulate(y_.begin(), y_.end(), 0); }

std::string Outcome::to_string() const {
  std::string s;
  s.reserve(y_.size());
  for (int v : y_) s.push_back(v ? '1' : '0');
  return s;
}

Outcome Outcome::parse(std::string_view bits) {
  std::vector<int> y;
  y.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1')
      throw std::invalid_argument("outcome string must contain only 0 and 1");
    y.push_back(ch - '0');
  }
  return Outcome(std::move(y));
}

std::size_t outcome_index(const Outcome& y) {
  std::size_t h = 1;
  for (int t = 1; t <= y.T(); ++t)
    if (y.y(t)) h += std::size_t{1} << (t - 1);
  return h;
}

Outcome index_outcome(std::size_t h, int T) {
  if (T < 1 || T > kMaxHorizon) throw std::out_of_range("horizon out of range");
  if (h < 1 || h > (std::size_t{1} << T)) throw std::out_of_range("outcome index out of range");
  std::vector<int> y(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) y[static_cast<std::size_t>(t)] = static_cast<int>(((h - 1) >> t) & 1U);
  return Outcome(std::move(y));
}

int lagged(const Outcome& y, const ModelSpec& spec, int t, int lag) {
  const int s = t - lag;
  if (s >= 1) return y.y(s);
  const auto k = static_cast<std::size_t>(-s);
  if (k >= spec.init.size()) throw std::out_of_range("history does not reach that far back");
  return spec.init[k];
}

namespace {

void check_args(const Outcome& y, const ModelSpec& spec, const ExpParams& params) {
  spec.validate();
  params.validate(spec);
  if (y.T() != spec.T) throw std::invalid_argument("outcome length must equal T");
}

}  // namespace

Rational prob_ar1(const Outcome& y, const ModelSpec& spec, const ExpParams& params) {
  if (spec.p != 1) throw std::invalid_argument("prob_ar1 requires p = 1");
  check_args(y, spec, params);
  Rational prob(1);
  for (int t = 1; t <= spec.T; ++t) {
    Rational e = params.b[t - 1] * params.u;
    if (lagged(y, spec, t, 1)) e *= params.c[0];
    // exp[(1 - 2y) z] is e for y = 0 and 1/e for y = 1
    const Rational signed_e = y.y(t) ? Rational(1 / e) : e;
    prob /= 1 + signed_e;
  }
  return prob;
}

Rational prob_ar2(const Outcome& y, const ModelSpec& spec, const ExpParams& params) {
  if (spec.p != 2) throw std::invalid_argument("prob_ar2 requires p = 2");
  check_args(y, spec, params);
  Rational prob(1);
  for (int t = 1; t <= spec.T; ++t) {
    Rational e = params.b[t - 1] * params.u;
    if (lagged(y, spec, t, 1)) e *= params.c[0];
    if (lagged(y, spec, t, 2)) e *= params.c[1];
    prob *= (y.y(t) ? e : Rational(1)) / (1 + e);
  }
  return prob;
}

Rational prob_general(const Outcome& y, const ModelSpec& spec, const ExpParams& params) {
  check_args(y, spec, params);
  Rational num(1), den(1);
  for (int t = 1; t <= spec.T; ++t) {
    Rational e = params.b[t - 1] * params.u;
    for (int l = 1; l <= spec.p; ++l)
      if (lagged(y, spec, t, l)) e *= params.c[l - 1];
    if (y.y(t)) num *= e;
    den *= 1 + e;
  }
  return num / den;
}

double prob_float(const Outcome& y, const ModelSpec& spec, double alpha,
                  std::span<const double> gamma, std::span<const double> x_index) {
  if (gamma.size() != static_cast<std::size_t>(spec.p))
    throw std::invalid_argument("gamma must have length p");
  if (!x_index.empty() && x_index.size() != static_cast<std::size_t>(spec.T))
    throw std::invalid_argument("x_index must be empty or have length T");
  double logp = 0.0;
  for (int t = 1; t <= spec.T; ++t) {
    double z = alpha + (x_index.empty() ? 0.0 : x_index[t - 1]);
    for (int l = 1; l <= spec.p; ++l)
      if (lagged(y, spec, t, l)) z += gamma[l - 1];
    // log of logistic((2y - 1) z), computed stably
    const double s = y.y(t) ? z : -z;
    logp -= (s > 0) ? std::log1p(std::exp(-s)) : (-s + std::log1p(std::exp(s)));
  }
  return std::exp(logp);
}

}  // namespace plogit
