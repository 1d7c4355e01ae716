#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/generators.hpp"
#include "urnlab/rates.hpp"

using namespace urnlab;

namespace {

ReplacementSpec spec3(std::initializer_list<std::initializer_list<double>> rows) {
  return ReplacementSpec::validated(Matrix(rows), uniform_initial(3));
}

void check_pair(const RatePair& got, double alpha, int beta) {
  CHECK(got.alpha == doctest::Approx(alpha).epsilon(1e-9));
  CHECK(got.beta == beta);
}

// Splits every zero diagonal block into scalar blocks, keeping the matrix and
// permutation; used to confirm the recursion is insensitive to coalescing.
CanonicalForm split_zero_blocks(const CanonicalForm& form) {
  CanonicalForm out;
  out.permutation = form.permutation;
  out.matrix = form.matrix;
  out.initial = form.initial;
  for (const Block& b : form.blocks) {
    if (b.kind == BlockKind::zero && b.size > 1) {
      for (std::size_t i = 0; i < b.size; ++i) {
        out.blocks.push_back({b.offset + i, 1, BlockKind::zero, 0.0, std::nullopt});
      }
    } else {
      out.blocks.push_back(b);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("rate_pairs on the counterexample: empty feed set falls back to the character") {
  const auto plan = rate_pairs(block_order(
      spec3({{0.5, 0.0, 0.5}, {0.0, 0.5, 0.5}, {0.0, 0.0, 1.0}})));
  REQUIRE(plan.pairs.size() == 3);
  check_pair(plan.pairs[0], 0.5, 0);
  check_pair(plan.pairs[1], 0.5, 0);  // block 2 is fed by nothing
  check_pair(plan.pairs[2], 1.0, 0);
}

TEST_CASE("rate_pairs on the chain: equal characters bump beta") {
  const auto plan = rate_pairs(block_order(
      spec3({{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}})));
  check_pair(plan.pairs[0], 0.0, 0);
  check_pair(plan.pairs[1], 0.0, 1);
  check_pair(plan.pairs[2], 1.0, 0);
}

TEST_CASE("rate_pairs on a single irreducible balanced block") {
  const auto spec = ReplacementSpec::validated({{0.0, 1.0}, {1.0, 0.0}}, uniform_initial(2));
  const auto plan = rate_pairs(block_order(spec));
  REQUIRE(plan.pairs.size() == 1);
  check_pair(plan.pairs[0], 1.0, 0);
}

TEST_CASE("rate_less is lexicographic with an alpha tolerance") {
  CHECK(rate_less({0.4, 7}, {0.5, 0}));
  CHECK(rate_less({0.5, 0}, {0.5, 1}));
  CHECK_FALSE(rate_less({0.5, 1}, {0.5, 0}));
  CHECK(rate_less({0.5 + 1e-12, 0}, {0.5, 1}));  // alphas tie within tolerance
}

TEST_CASE("cross_check_cluster_rates matches on the worked specs") {
  for (const auto& rows : {
           Matrix{{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.0, 0.0, 1.0}},
           Matrix{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}},
       }) {
    const auto spec = ReplacementSpec::validated(rows, uniform_initial(3));
    const auto canon = block_order(spec);
    const auto cf = increasing_order(canon);
    REQUIRE(cf.assumption_a.holds);
    const auto check = cross_check_cluster_rates(rate_pairs(canon), cf);
    CHECK(check.match);
  }
  const auto spec = ReplacementSpec::validated({{0.0, 1.0}, {1.0, 0.0}}, uniform_initial(2));
  const auto canon = block_order(spec);
  CHECK(cross_check_cluster_rates(rate_pairs(canon), increasing_order(canon)).match);
}

TEST_CASE("cluster values disagree with the recursion when assumption (A) fails") {
  // The counterexample's second block has true rate (0.5, 0), while its
  // cluster carries (lambda, kappa) = (0.5, 1): the cross-check is only
  // meaningful under assumption (A).
  const auto spec = spec3({{0.5, 0.0, 0.5}, {0.0, 0.5, 0.5}, {0.0, 0.0, 1.0}});
  const auto canon = block_order(spec);
  const auto cf = increasing_order(canon);
  REQUIRE_FALSE(cf.assumption_a.holds);
  const auto check = cross_check_cluster_rates(rate_pairs(canon), cf);
  CHECK_FALSE(check.match);
}

TEST_CASE("rate pair properties over random balanced specs") {
  RngStream rng(1618, 2);
  for (int trial = 0; trial < 150; ++trial) {
    const auto gen = testing::random_balanced_spec(rng);
    const CanonicalForm canon = block_order(gen.spec);
    const RatePlan plan = rate_pairs(canon);
    const ClusterForm cf = increasing_order(canon);

    // Monotone along nonzero coupling, alpha dominates the character, and
    // the last block grows linearly.
    for (std::size_t k = 0; k < canon.block_count(); ++k) {
      CHECK(plan.pairs[k].alpha >= canon.blocks[k].character - kCharacterTol);
      CHECK(plan.pairs[k].alpha <= 1.0 + kCharacterTol);
      CHECK(plan.pairs[k].beta >= 0);
      for (std::size_t m = 0; m < k; ++m) {
        if (canon.coupling_nonzero(m, k)) {
          CHECK_FALSE(rate_less(plan.pairs[k], plan.pairs[m]));
        }
      }
    }
    check_pair(plan.pairs.back(), 1.0, 0);

    if (cf.assumption_a.holds) {
      CHECK(cross_check_cluster_rates(plan, cf).match);
    }

    // Splitting coalesced zero blocks into single colors leaves every rate
    // unchanged: the split pieces inherit the coalesced block's pair.
    const RatePlan coalesced = rate_pairs(cf.base);
    const RatePlan split = rate_pairs(split_zero_blocks(cf.base));
    std::size_t split_index = 0;
    for (std::size_t k = 0; k < cf.base.block_count(); ++k) {
      const Block& b = cf.base.blocks[k];
      const std::size_t pieces = (b.kind == BlockKind::zero && b.size > 1) ? b.size : 1;
      for (std::size_t p = 0; p < pieces; ++p, ++split_index) {
        CHECK(std::abs(split.pairs[split_index].alpha - coalesced.pairs[k].alpha) <=
              kCharacterTol);
        CHECK(split.pairs[split_index].beta == coalesced.pairs[k].beta);
      }
    }
  }
}
