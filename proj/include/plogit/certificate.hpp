#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace plogit {

enum class RankMethod {
  /// Exact rank of a polynomial coefficient matrix; an equality claim.
  polynomial_exact,
  /// Exact rank of finitely many random rows; a certified lower bound.
  sampled_lower_bound,
};

std::string_view to_string(RankMethod method);

/// Rank of the span of outcome-probability vectors over the fixed effect,
/// together with the evidence behind it.
struct RankCertificate {
  std::size_t claimed_rank = 0;
  RankMethod method = RankMethod::polynomial_exact;
  std::size_t draws_used = 0;                // rows per trial for sampled ranks
  std::vector<std::uint64_t> seeds;          // one per trial
  std::vector<std::size_t> trial_ranks;      // rank observed in each trial
  bool stable_across_trials = true;
};

}  // namespace plogit
