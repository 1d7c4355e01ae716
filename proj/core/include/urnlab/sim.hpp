#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "urnlab/rates.hpp"
#include "urnlab/replacement.hpp"
#include "urnlab/rng.hpp"

namespace urnlab {

/// Counts after `steps` draws, kept in the original color order. Counts need
/// not be integers; the total equals 1 + steps up to accumulated rounding
/// (within 1e-6 for up to 1e7 draws). `compensation` carries the per-color
/// Kahan residuals of the count accumulation and is sized lazily by step().
struct UrnState {
  Vec counts;
  std::uint64_t steps = 0;
  Vec compensation;
};

/// One draw: color i is selected with probability counts_i / (1 + steps) by a
/// cumulative scan, then row i of the replacement matrix is added.
void step(UrnState& state, const ReplacementSpec& spec, RngStream& rng);

struct SimulationTrace {
  std::uint64_t seed = 0;
  std::uint64_t replication_id = 0;
  std::vector<std::pair<std::uint64_t, Vec>> checkpoints;  // (N, counts)
};

/// Power-of-two checkpoint schedule clipped to [2^min_exp, n_max], with n_max
/// itself always included. Log-spaced points suit exponent regressions.
std::vector<std::uint64_t> pow2_schedule(std::uint64_t n_max, unsigned min_exp = 10);

/// Runs n_max draws, recording the initial composition and every scheduled
/// checkpoint. The PRNG stream is derived from (seed, replication_id) alone,
/// so traces are reproducible and independent of scheduling.
SimulationTrace simulate(const ReplacementSpec& spec, std::uint64_t n_max,
                         std::span<const std::uint64_t> schedule, std::uint64_t seed,
                         std::uint64_t replication_id);

/// Replications 0..count-1 across `threads` workers (0 = hardware default).
/// Output is ordered by replication id regardless of thread count.
std::vector<SimulationTrace> run_replications(const ReplacementSpec& spec,
                                              std::uint64_t n_max,
                                              std::span<const std::uint64_t> schedule,
                                              std::uint64_t seed, std::uint64_t count,
                                              unsigned threads = 0);

/// Exact expected counts after n draws by the deterministic recursion
/// E_n = E_{n-1} (I + R/n). O(n D^2) time, independent of any sampling.
Vec expectation(const ReplacementSpec& spec, std::uint64_t n);

/// Expected counts at each scheduled checkpoint, one sweep.
std::vector<std::pair<std::uint64_t, Vec>> expectation_checkpoints(
    const ReplacementSpec& spec, std::span<const std::uint64_t> schedule);

/// Per-block counts divided by N^alpha log^beta N (natural log). Scaling with
/// beta > 0 is undefined at N <= 1 and N^alpha at N = 0; such checkpoints are
/// emitted unscaled with scaling_valid = false.
struct ScaledBlockValue {
  std::uint64_t n = 0;
  std::size_t block = 0;
  Vec value;
  bool scaling_valid = true;
};

std::vector<ScaledBlockValue> scaled_counts(const SimulationTrace& trace,
                                            const RatePlan& plan);

/// CSV with columns replication_id, N, then one column per color in the
/// original order.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);

/// Mean and standard error per color at each shared checkpoint, reduced in
/// replication order so the result is independent of thread count.
struct Aggregate {
  std::vector<std::uint64_t> ns;
  std::vector<Vec> mean;
  std::vector<Vec> se;
  std::size_t replications = 0;
};

Aggregate aggregate_traces(const std::vector<SimulationTrace>& traces);
void write_aggregate_csv(std::ostream& out, const Aggregate& agg);

}  // namespace urnlab
