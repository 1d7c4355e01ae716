#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "urnlab/analyze.hpp"
#include "urnlab/sim.hpp"

namespace urnlab {

/// Tolerances are engineering choices; the limit theory gives no rates of
/// convergence. Log-power factors converge very slowly, so path statistics
/// get loose bounds while exact expectation-oracle statistics get tight ones. All comparisons against
/// predicted constants are absolute differences. The ratio default reflects
/// runs of about 2^20 draws, where the finite-N bias of per-path V-hat
/// ratios is still near 0.15; tighten it for longer runs.
struct VerifyOptions {
  double tol_direction = 0.05;  // radians; also max-abs bound for stationary
  double tol_exponent = 0.02;   // |fitted - predicted| for alpha
  double tol_ratio = 0.25;      // V-hat ratios and zero-cluster limits
  std::uint64_t window_divisor = 16;  // top window: N >= N_max / divisor
};

/// Exponent fit for one block: the alpha slope is taken on the expectation
/// oracle with the predicted log power divided out, the beta slope on the
/// oracle with the predicted N power divided out (log-log against log log N).
/// Beta is selected correctly when the fit lands within 0.5, half the spacing
/// of the competing integer orders.
struct ExponentCheck {
  std::size_t block = 0;
  double alpha = 0.0;
  int beta = 0;
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  bool alpha_ok = false;
  bool beta_ok = false;
  bool checked = false;
};

struct DirectionCheck {
  std::size_t block = 0;
  std::size_t cluster = 0;
  double median_angle = 0.0;
  std::size_t traces = 0;
  bool ok = false;
  bool checked = false;
};

struct RatioCheck {
  std::size_t cluster = 0;
  double w = 0.0;
  double oracle_ratio = 0.0;
  double path_median = 0.0;
  bool oracle_ok = false;
  bool path_ok = false;
  bool oracle_checked = false;
  bool path_checked = false;
};

struct ZeroLimitCheck {
  std::size_t block = 0;
  Vec predicted;
  Vec oracle_scaled;
  double rel_error = 0.0;
  bool ok = false;
  bool checked = false;
};

struct StationaryCheck {
  double oracle_max_error = 0.0;
  double path_median_max_error = 0.0;
  bool ok = false;
  bool oracle_checked = false;
  bool path_checked = false;
};

/// Median over traces of the scaled leading-block statistic
/// C_N^{(i_j)} . zeta / (N^lambda log^kappa N) at the final checkpoint.
struct VhatEstimate {
  std::size_t cluster = 0;
  double median = 0.0;
  std::size_t traces = 0;
};

struct ConvergenceReport {
  std::vector<std::uint64_t> window;  // oracle checkpoints used for fits
  /// Expectation-oracle counts per block, scaled by the predicted
  /// N^alpha log^beta N, at every window checkpoint.
  std::vector<ScaledBlockValue> oracle_scaled;
  std::vector<VhatEstimate> vhat_estimates;
  std::vector<ExponentCheck> exponents;
  std::vector<DirectionCheck> directions;
  std::vector<RatioCheck> ratios;
  std::vector<ZeroLimitCheck> zero_limits;
  std::optional<StationaryCheck> stationary;
  std::vector<std::string> warnings;
  VerifyOptions options;
  bool pass = false;
};

/// Compares simulated traces and the exact expectation oracle against the
/// predicted rates, directions, cluster ratio links, zero-cluster limits and
/// the stationary distribution. Checks whose inputs are missing (no traces,
/// too few oracle checkpoints, assumption (A) violated) are skipped with a
/// warning rather than failed.
ConvergenceReport verify(const Analysis& analysis,
                         const std::vector<SimulationTrace>& traces,
                         const std::vector<std::pair<std::uint64_t, Vec>>& expectations,
                         const VerifyOptions& options = {});

}  // namespace urnlab
