#pragma once

#include "plogit/model.hpp"
#include "plogit/random.hpp"
#include "plogit/rational_matrix.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace plogit {

/// Fixed-effect draws u_g = e^{alpha_g}; one matrix row per draw.
struct AlphaDraws {
  std::vector<Rational> u;
  std::uint64_t seed = 0;

  std::size_t size() const { return u.size(); }
  /// Throws std::invalid_argument on a nonpositive or repeated entry.
  void validate() const;
};

AlphaDraws draw_alpha(std::size_t n, std::uint64_t seed, std::span<const Rational> exclude = {});

enum class MatrixKind { pbar, pbreve, pddot, ptilde };

std::string_view to_string(MatrixKind kind);

/// Rows are alpha draws, columns are outcomes. column_index_map[j] is the
/// outcome index h (1-based) that column j holds.
struct BuiltMatrix {
  MatrixKind kind = MatrixKind::pbar;
  ModelSpec spec;
  RationalMatrix matrix;
  std::vector<std::size_t> column_index_map;
};

/// Outcome probabilities: entry (g, h) = Pr(y_h | init, u_g; c, b).
BuiltMatrix build_pbar(const ModelSpec& spec, std::span<const Rational> c,
                       std::span<const Rational> b, const AlphaDraws& draws);

/// Column- and row-rescaled probabilities with P_{g,t} = b_t u_g:
///   prod_t P_{g,t}^{y_t} * prod_{t>=2} (1 + P_{g,t}) / (1 + P_{g,t} prod_l c_l^{y_{t-l}}).
/// For p = 1 this is P_T^{y_T} prod_{t<T} (P_t (1+P_{t+1}) / (1 + P_{t+1} c))^{y_t}.
/// Only p in {1, 2}.
BuiltMatrix build_pbreve(const ModelSpec& spec, const AlphaDraws& draws,
                         std::span<const Rational> c, std::span<const Rational> b);

/// The AR(2) rescaling in the grouped three-factor form that attaches the
/// (1 + P_{t+1} c_2) term to the start of a run of ones. It matches the
/// rank of P-bar for beta = 0 but is not a diagonal rescaling of it; kept
/// for comparison and as the basis of the AR(2) P-double-dot matrix.
BuiltMatrix build_pbreve_ar2_grouped(const ModelSpec& spec, const AlphaDraws& draws,
                                     std::span<const Rational> c, std::span<const Rational> b);

/// True iff the elementwise ratio pbreve / pbar has rank <= 1, i.e. pbreve
/// = D1 pbar D2 for diagonal D1, D2. Throws std::logic_error on a zero
/// pbar entry and std::invalid_argument on mismatched inputs.
bool ratio_rank1_check(const BuiltMatrix& pbar, const BuiltMatrix& pbreve);

/// Elementwise ratio pbreve / pbar.
RationalMatrix elementwise_ratio(const BuiltMatrix& pbar, const BuiltMatrix& pbreve);

/// True iff two ratio matrices (same draws, different initial conditions)
/// share one column factor, i.e. their vertical stack has rank <= 1.
bool shared_column_factor(const RationalMatrix& ratio_a, const RationalMatrix& ratio_b);

/// Polynomial-in-u form of pbreve for the model without covariates
/// (b must be all ones). p = 1, or p = 2 with the y_0 = 1 / y_0 = 0
/// prefactor exponents.
BuiltMatrix build_pddot(const ModelSpec& spec, const AlphaDraws& draws,
                        std::span<const Rational> c, std::span<const Rational> b);

/// The 2T outcome indices whose first k or last k entries are one, in slot
/// order: slot 2k+1 (1-based) holds first-k-ones for k = 0..T-1, slot
/// 2(k+1) holds last-(k+1)-ones.
std::vector<std::size_t> lemma1_columns(int T);

/// 2T x 2T matrix with odd slots (u (1+u) / (1+cu))^k and even slots
/// u (u (1+u) / (1+cu))^k. Requires exactly 2T draws.
BuiltMatrix build_ptilde(int T, const AlphaDraws& draws, const Rational& c);

/// A random selection of 2T outcomes: the all-zeros and all-ones paths and,
/// for each k in 1..T-1, one path with k ones and y_T = 0 plus one with
/// k ones and y_T = 1.
std::vector<std::size_t> balanced_selection(int T, Rng& rng);

}  // namespace plogit
