#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support/generators.hpp"
#include "urnlab/analyze.hpp"
#include "urnlab/sim.hpp"
#include "urnlab/stats.hpp"

using namespace urnlab;

namespace {

const ReplacementSpec kHalfHalf = ReplacementSpec::validated(
    {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.0, 0.0, 1.0}}, uniform_initial(3));

}  // namespace

TEST_CASE("step with a single color is forced") {
  const auto spec = ReplacementSpec::validated(Matrix{{1.0}}, Vec{1.0});
  UrnState state{spec.initial(), 0, {}};
  RngStream rng(1, 0);
  for (int n = 1; n <= 100; ++n) {
    step(state, spec, rng);
    CHECK(state.counts[0] == doctest::Approx(1.0 + n).epsilon(1e-12));
  }
}

TEST_CASE("simulate records requested checkpoints, starting at the initial state") {
  const auto spec = ReplacementSpec::validated(Matrix{{1.0}}, Vec{1.0});
  const std::vector<std::uint64_t> marks{1, 2};
  const SimulationTrace trace = simulate(spec, 2, marks, 9, 0);
  REQUIRE(trace.checkpoints.size() == 3);
  CHECK(trace.checkpoints[0].first == 0);
  CHECK(trace.checkpoints[0].second == Vec{1.0});
  CHECK(trace.checkpoints[1].second[0] == doctest::Approx(2.0));
  CHECK(trace.checkpoints[2].second[0] == doctest::Approx(3.0));
}

TEST_CASE("simulate with zero steps yields only the initial composition") {
  const SimulationTrace trace = simulate(kHalfHalf, 0, pow2_schedule(0), 5, 0);
  REQUIRE(trace.checkpoints.size() == 1);
  CHECK(trace.checkpoints[0].first == 0);
}

TEST_CASE("identical (seed, replication) reproduce bit-identical traces") {
  const auto schedule = pow2_schedule(1 << 14);
  const SimulationTrace a = simulate(kHalfHalf, 1 << 14, schedule, 42, 3);
  const SimulationTrace b = simulate(kHalfHalf, 1 << 14, schedule, 42, 3);
  REQUIRE(a.checkpoints.size() == b.checkpoints.size());
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
    CHECK(a.checkpoints[i].second == b.checkpoints[i].second);
  }
  const SimulationTrace c = simulate(kHalfHalf, 1 << 14, schedule, 42, 4);
  CHECK(c.checkpoints.back().second != a.checkpoints.back().second);
}

TEST_CASE("replication streams share marginal statistics") {
  // Two batches on different replication ranges: final means agree within
  // four combined standard errors per coordinate.
  const std::uint64_t n = 4096;
  const std::uint64_t reps = 400;
  const std::vector<std::uint64_t> schedule{n};
  Vec mean_a(3, 0.0), mean_b(3, 0.0), m2_a(3, 0.0), m2_b(3, 0.0);
  for (std::uint64_t r = 0; r < reps; ++r) {
    const Vec a = simulate(kHalfHalf, n, schedule, 11, r).checkpoints.back().second;
    const Vec b = simulate(kHalfHalf, n, schedule, 11, reps + r).checkpoints.back().second;
    for (int c = 0; c < 3; ++c) {
      mean_a[c] += a[c];
      m2_a[c] += a[c] * a[c];
      mean_b[c] += b[c];
      m2_b[c] += b[c] * b[c];
    }
  }
  for (int c = 0; c < 3; ++c) {
    const double r = static_cast<double>(reps);
    mean_a[c] /= r;
    mean_b[c] /= r;
    const double var_a = (m2_a[c] - r * mean_a[c] * mean_a[c]) / (r - 1.0);
    const double var_b = (m2_b[c] - r * mean_b[c] * mean_b[c]) / (r - 1.0);
    const double se = std::sqrt((var_a + var_b) / r);
    CHECK(std::abs(mean_a[c] - mean_b[c]) <= 4.0 * se);
  }
}

TEST_CASE("expectation matches the hand-computed two-step product") {
  const auto spec =
      ReplacementSpec::validated({{0.0, 1.0}, {1.0, 0.0}}, Vec{0.5, 0.5});
  const Vec e1 = expectation(spec, 1);
  CHECK(e1[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e1[1] == doctest::Approx(1.0).epsilon(1e-14));
  const Vec e2 = expectation(spec, 2);
  CHECK(e2[0] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(e2[1] == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("blockwise rising-product route reproduces the expectation recursion") {
  // Dual route: E[C_N^{(k)} zeta] computed directly from the full recursion
  // must match the per-block series
  //   Pi_N(mu_k) (C_0^{(k)} zeta + sum_m sum_n E[C_n^{(m)}] Q_{mk} zeta
  //                                 / ((n+1) Pi_{n+1}(mu_k))).
  RngStream rng(8086, 0);
  for (int trial = 0; trial < 8; ++trial) {
    const auto gen = testing::random_balanced_spec(rng);
    const auto& spec = gen.spec;
    const CanonicalForm canon = block_order(spec);
    const std::uint64_t n_max = 4096;

    // Expectations in original order for every step.
    std::vector<Vec> expectations(n_max + 1);
    expectations[0] = spec.initial();
    {
      Vec e = spec.initial();
      const Matrix& r = spec.matrix();
      for (std::uint64_t n = 1; n <= n_max; ++n) {
        const Vec delta = e * r;
        for (std::size_t j = 0; j < e.size(); ++j) {
          e[j] += delta[j] / static_cast<double>(n);
        }
        expectations[n] = e;
      }
    }

    for (std::size_t k = 0; k < canon.block_count(); ++k) {
      const Block& b = canon.blocks[k];
      const Vec zeta = b.eigen ? b.eigen->right : Vec(b.size, 1.0);
      const auto colors = canon.original_colors(k);

      double series = dot(gather(expectations[0], colors), zeta);
      double rising = 1.0;  // Pi_n(mu_k), maintained incrementally
      for (std::uint64_t n = 0; n < n_max; ++n) {
        const double next_rising =
            rising * (1.0 + b.character / static_cast<double>(n + 1));
        double inflow = 0.0;
        for (std::size_t m = 0; m < k; ++m) {
          if (!canon.coupling_nonzero(m, k)) continue;
          const Vec em = gather(expectations[n], canon.original_colors(m));
          inflow += dot(em * canon.coupling(m, k), zeta);
        }
        series += inflow / (static_cast<double>(n + 1) * next_rising);
        rising = next_rising;
      }

      const double direct = dot(gather(expectations[n_max], colors), zeta);
      CHECK(direct == doctest::Approx(rising * series).epsilon(1e-9));
    }
  }
}

TEST_CASE("Monte Carlo means are consistent with the expectation oracle") {
  const std::uint64_t n = 10000;
  const std::uint64_t reps = 2000;
  const Vec expected = expectation(kHalfHalf, n);
  const std::vector<std::uint64_t> schedule{n};
  const auto traces = run_replications(kHalfHalf, n, schedule, 2718, reps, 0);
  const Aggregate agg = aggregate_traces(traces);
  REQUIRE(agg.ns.back() == n);
  for (int c = 0; c < 3; ++c) {
    const double z =
        std::abs(agg.mean.back()[c] - expected[c]) / std::max(agg.se.back()[c], 1e-12);
    CHECK(z <= 4.0);
  }
}

TEST_CASE("total count stays pinned to 1 + N") {
  const auto trace = simulate(kHalfHalf, 1 << 20, pow2_schedule(1 << 20), 7, 0);
  for (const auto& [n, counts] : trace.checkpoints) {
    CHECK(std::abs(sum(counts) - (1.0 + static_cast<double>(n))) <= 1e-6);
  }

  // Worst case for accumulation bias: every entry rounds the same way and
  // counts reach 1e7 scale.
  const double third = 1.0 / 3.0;
  const auto thirds = ReplacementSpec::validated(
      {{third, third, third}, {third, third, third}, {third, third, third}},
      uniform_initial(3));
  const std::uint64_t n_long = 10000000;
  const std::vector<std::uint64_t> marks{n_long};
  const auto long_trace = simulate(thirds, n_long, marks, 15, 0);
  CHECK(std::abs(sum(long_trace.checkpoints.back().second) -
                 (1.0 + static_cast<double>(n_long))) <= 1e-6);
}

TEST_CASE("per-color counts are nondecreasing along a trace") {
  RngStream rng(99, 0);
  const auto gen = testing::random_balanced_spec(rng);
  const auto trace = simulate(gen.spec, 1 << 12, pow2_schedule(1 << 12, 4), 3, 1);
  for (std::size_t i = 1; i < trace.checkpoints.size(); ++i) {
    const Vec& prev = trace.checkpoints[i - 1].second;
    const Vec& cur = trace.checkpoints[i].second;
    for (std::size_t c = 0; c < cur.size(); ++c) CHECK(cur[c] >= prev[c] - 1e-9);
  }
}

TEST_CASE("scaled_counts divides by N^alpha log^beta N and flags unusable scales") {
  const auto plan = rate_pairs(block_order(kHalfHalf));
  SimulationTrace trace;
  trace.checkpoints = {{0, Vec{0.3, 0.3, 0.4}},
                       {1, Vec{0.5, 0.6, 0.9}},
                       {100, Vec{5.0, 12.0, 84.0}}};
  const auto scaled = scaled_counts(trace, plan);
  REQUIRE(scaled.size() == 9);

  // N = 0: alpha > 0 scaling flagged.
  CHECK_FALSE(scaled[0].scaling_valid);
  // N = 1: beta > 0 scaling flagged (log 1 = 0), alpha-only block is fine.
  const auto& block1_at1 = scaled[3];
  CHECK(block1_at1.scaling_valid);
  CHECK(block1_at1.value[0] == doctest::Approx(0.5 / 1.0));
  CHECK_FALSE(scaled[4].scaling_valid);

  const double n = 100.0;
  CHECK(scaled[6].value[0] == doctest::Approx(5.0 / std::sqrt(n)));
  CHECK(scaled[7].value[0] == doctest::Approx(12.0 / (std::sqrt(n) * std::log(n))));
  CHECK(scaled[8].value[0] == doctest::Approx(84.0 / n));
}

TEST_CASE("direction error medians shrink across two decades of N") {
  const auto spec = ReplacementSpec::validated({{0.1, 0.4, 0.25, 0.25},
                                                {0.4, 0.1, 0.25, 0.25},
                                                {0.0, 0.0, 0.3, 0.7},
                                                {0.0, 0.0, 0.7, 0.3}},
                                               uniform_initial(4));
  const Analysis a = analyze(spec);
  REQUIRE(a.limits.descriptors[0].has_value());
  REQUIRE(a.limits.descriptors[0]->kind == LimitKind::random_direction);
  const Vec& direction = a.limits.descriptors[0]->vector;
  const auto colors = a.cluster_form.base.original_colors(0);

  const std::vector<std::uint64_t> schedule{10000, 100000, 1000000};
  const auto traces = run_replications(spec, 1000000, schedule, 404, 30, 0);
  Vec medians;
  for (std::size_t ci = 1; ci <= 3; ++ci) {  // skip the N = 0 checkpoint
    std::vector<double> angles;
    for (const auto& trace : traces) {
      angles.push_back(
          angle_between(gather(trace.checkpoints[ci].second, colors), direction));
    }
    medians.push_back(median(angles));
  }
  CHECK(medians[1] < medians[0]);
  CHECK(medians[2] < medians[1]);
}

TEST_CASE("zero-cluster counts grow without bound exactly when fed") {
  // Chain spec: color 1 receives nothing and stays frozen at its initial
  // count; color 2 is fed by color 1 and grows like log N.
  const auto spec = ReplacementSpec::validated(
      {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}}, Vec{0.2, 0.3, 0.5});
  const auto trace = simulate(spec, 1 << 20, pow2_schedule(1 << 20), 6, 0);
  for (const auto& [n, counts] : trace.checkpoints) {
    // Exact up to the periodic total-resync rescale.
    CHECK(counts[0] == doctest::Approx(0.2).epsilon(1e-9));
  }
  CHECK(trace.checkpoints.back().second[1] > 5.0 * 0.3);
}

TEST_CASE("pow2_schedule spans powers of two and always ends at n_max") {
  CHECK(pow2_schedule(1 << 12) ==
        std::vector<std::uint64_t>{1024, 2048, 4096});
  CHECK(pow2_schedule(5000).back() == 5000);
  CHECK(pow2_schedule(0).empty());
}

TEST_CASE("run_replications is independent of thread count") {
  const auto schedule = pow2_schedule(1 << 12);
  const auto one = run_replications(kHalfHalf, 1 << 12, schedule, 13, 8, 1);
  const auto eight = run_replications(kHalfHalf, 1 << 12, schedule, 13, 8, 8);
  REQUIRE(one.size() == eight.size());
  for (std::size_t r = 0; r < one.size(); ++r) {
    REQUIRE(one[r].checkpoints.size() == eight[r].checkpoints.size());
    for (std::size_t i = 0; i < one[r].checkpoints.size(); ++i) {
      CHECK(one[r].checkpoints[i].second == eight[r].checkpoints[i].second);
    }
  }

  std::ostringstream csv_one, csv_eight;
  write_aggregate_csv(csv_one, aggregate_traces(one));
  write_aggregate_csv(csv_eight, aggregate_traces(eight));
  CHECK(csv_one.str() == csv_eight.str());
}

TEST_CASE("trace CSV carries replication id, N and original-order counts") {
  SimulationTrace trace;
  trace.replication_id = 7;
  trace.checkpoints = {{0, Vec{0.25, 0.75}}, {2, Vec{1.25, 1.75}}};
  std::ostringstream out;
  write_trace_csv(out, trace);
  CHECK(out.str() ==
        "replication_id,N,color_1,color_2\n"
        "7,0,0.25,0.75\n"
        "7,2,1.25,1.75\n");
}
