#pragma once

#include "plogit/rational.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace plogit {

using Rng = std::mt19937_64;

inline constexpr long kDrawBound = 10000;

/// Mixes a base seed with a sequence of tags (splitmix64 finalizer), so
/// every experiment cell and trial owns an independent stream.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

/// Positive rational n/d with 1 <= n, d <= bound, canonicalized.
Rational draw_positive_rational(Rng& rng, long bound = kDrawBound);

/// n pairwise distinct positive rationals, none equal to an entry of
/// `exclude`. Rejection-resamples on collision.
std::vector<Rational> draw_distinct(Rng& rng, std::size_t n,
                                    std::span<const Rational> exclude = {});

/// Lag coefficients c_1..c_p for a nondegenerate dynamic model: no
/// product of a nonempty subset of the c_l equals 1 (c != 1; for p = 2
/// also c_1 c_2 != 1).
std::vector<Rational> draw_lag_coefficients(Rng& rng, int p);

}  // namespace plogit
