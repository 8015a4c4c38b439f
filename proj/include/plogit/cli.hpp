#pragma once

#include "plogit/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plogit::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Raised for configurations that cannot run; maps to exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;  // rank basis dims patterns stacked lemma1 poly simulate estimate mc
  int p = 1;
  std::optional<std::vector<int>> T;  // unset selects the command default
  std::string init = "all";          // history bits (y_0 first) or "all"
  std::string covariates = "both";   // beta0, generic or both
  bool full_grid = false;            // dims: run the built-in grid
  std::vector<std::string> c;        // exact lag coefficients "p/q"; empty draws them
  std::vector<std::string> b;        // exact covariate indices; empty follows covariates
  std::vector<double> gamma;         // true lag coefficients for simulation
  double beta = 0.0;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "json";
  std::size_t trials = 0;  // 0 selects the command default
  std::size_t n_fresh = 50;
  std::size_t selections = 20;
  std::size_t x_draws = 2;
  std::size_t reps = 200;
  std::size_t N = 2000;
  std::vector<std::size_t> sample_sizes{500, 2000};
  std::string alpha = "normal:0:1";
  std::string init_scheme = "bernoulli:0.5";
  double svd_threshold = 1e-9;
  bool lenient_svd = false;  // estimate/mc: skip the nullspace dimension check
  bool check = false;        // mc: assert the bias and RMSE-ratio properties
  unsigned threads = 0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

const std::vector<std::string>& command_names();

/// Fills command defaults and checks the fields; throws UsageError.
RunConfig resolve(RunConfig config);

/// Config echo; threads is left out since results do not depend on it.
json config_to_json(const RunConfig& config);
RunConfig config_from_json(const json& j);

/// "a..b" (inclusive, empty when b < a), "a,b,c" or "a".
std::vector<int> parse_range(std::string_view text);

/// Runs a resolved config.
Report execute(const RunConfig& config);

/// Resolves, executes and writes the report. Returns 0 when every asserted
/// check passes, 1 on a failed check or runtime error, 2 on a usage error.
int run(const RunConfig& config, const std::string& out_path, std::ostream& log);

/// Command-line entry point.
int main_entry(int argc, char** argv);

}  // namespace plogit::cli
