#pragma once

#include "plogit/rational.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace plogit {

inline constexpr int kMaxHorizon = 16;

/// Lag order, horizon and the conditioning history. init[0] = y_0,
/// init[1] = y_{-1}, and so on.
struct ModelSpec {
  int p = 1;
  int T = 2;
  std::vector<int> init;

  /// Throws std::invalid_argument unless 0 <= p <= 3, 2 <= T <= kMaxHorizon,
  /// init.size() == p and every init entry is 0 or 1.
  void validate() const;

  std::size_t outcome_count() const { return std::size_t{1} << T; }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Parameters in exponentiated form: u = e^alpha, c_l = e^{gamma_l},
/// b_t = e^{x_t' beta}.
struct ExpParams {
  Rational u{1};
  std::vector<Rational> c;
  std::vector<Rational> b;

  /// Checks lengths against spec and strict positivity.
  void validate(const ModelSpec& spec) const;
};

/// A binary outcome path y_1..y_T.
class Outcome {
 public:
  Outcome() = default;
  explicit Outcome(std::vector<int> y);

  int T() const { return static_cast<int>(y_.size()); }
  /// 1-based period access, y(1) .. y(T).
  int y(int t) const { return y_[static_cast<std::size_t>(t - 1)]; }
  /// y^S, the number of ones.
  int sum() const;
  const std::vector<int>& bits() const { return y_; }

  /// "101" means y_1 = 1, y_2 = 0, y_3 = 1.
  std::string to_string() const;
  static Outcome parse(std::string_view bits);

  friend bool operator==(const Outcome&, const Outcome&) = default;

 private:
  std::vector<int> y_;
};

/// h = 1 + sum_t 2^{t-1} y_t, in 1..2^T.
std::size_t outcome_index(const Outcome& y);
/// Inverse of outcome_index. Throws std::out_of_range unless 1 <= h <= 2^T.
Outcome index_outcome(std::size_t h, int T);

/// y_{t-lag} with t 1-based; reaches into spec.init for t - lag <= 0.
int lagged(const Outcome& y, const ModelSpec& spec, int t, int lag);

/// AR(1) outcome probability: prod_t 1 / (1 + e_t^{1 - 2 y_t}) with
/// e_t = b_t c^{y_{t-1}} u. Requires spec.p == 1.
Rational prob_ar1(const Outcome& y, const ModelSpec& spec, const ExpParams& params);

/// AR(2) outcome probability: prod_t e_t^{y_t} / (1 + e_t) with
/// e_t = b_t c_1^{y_{t-1}} c_2^{y_{t-2}} u. Requires spec.p == 2.
Rational prob_ar2(const Outcome& y, const ModelSpec& spec, const ExpParams& params);

/// Any supported lag order 0..3 (p = 3 is exploratory).
Rational prob_general(const Outcome& y, const ModelSpec& spec, const ExpParams& params);

/// Floating-point counterpart of prob_general in the raw parameterization:
/// log-odds x_index[t] + sum_l gamma[l] y_{t-l} + alpha.
double prob_float(const Outcome& y, const ModelSpec& spec, double alpha,
                  std::span<const double> gamma, std::span<const double> x_index);

}  // namespace plogit
