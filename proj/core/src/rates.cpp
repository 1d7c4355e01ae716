#include "urnlab/rates.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace urnlab {

bool rate_less(const RatePair& a, const RatePair& b, double tol) {
  if (a.alpha < b.alpha - tol) return true;
  if (a.alpha > b.alpha + tol) return false;
  return a.beta < b.beta;
}

RatePlan rate_pairs(const CanonicalForm& canon) {
  if (canon.block_count() == 0) {
    throw std::invalid_argument("rate_pairs: empty form");
  }

  std::vector<RatePair> pairs;
  pairs.reserve(canon.block_count());

  for (std::size_t k = 0; k < canon.block_count(); ++k) {
    const double mu = canon.blocks[k].character;

    // Lexicographic maximum over the rates of blocks feeding block k. The
    // empty case stays an absent value so it can never win a comparison.
    std::optional<RatePair> incoming;
    for (std::size_t m = 0; m < k; ++m) {
      if (!canon.coupling_nonzero(m, k)) continue;
      if (!incoming || rate_less(*incoming, pairs[m])) incoming = pairs[m];
    }

    if (!incoming) {
      pairs.push_back({mu, 0});
    } else if (mu > incoming->alpha + kCharacterTol) {
      pairs.push_back({mu, 0});
    } else if (mu >= incoming->alpha - kCharacterTol) {
      pairs.push_back({std::max(mu, incoming->alpha), incoming->beta + 1});
    } else {
      pairs.push_back({incoming->alpha, incoming->beta});
    }
  }

  if (std::abs(pairs.back().alpha - 1.0) > kCharacterTol || pairs.back().beta != 0) {
    throw std::logic_error("rate_pairs: last block rate is not (1, 0)");
  }
  return {std::move(pairs), canon};
}

CrossCheck cross_check_cluster_rates(const RatePlan& plan, const ClusterForm& cf) {
  CrossCheck result;

  // Map each color to its cluster in the increasing-order arrangement.
  std::vector<std::size_t> cluster_of_color(cf.base.color_count());
  for (std::size_t k = 0; k < cf.base.block_count(); ++k) {
    const std::size_t j = cf.cluster_of(k);
    for (std::size_t c : cf.base.original_colors(k)) cluster_of_color[c] = j;
  }

  for (std::size_t k = 0; k < plan.source_form.block_count(); ++k) {
    const auto colors = plan.source_form.original_colors(k);
    const std::size_t j = cluster_of_color[colors.front()];
    const Cluster& cl = cf.clusters[j];
    const RatePair& rate = plan.pairs[k];
    const bool alpha_ok = std::abs(rate.alpha - cl.leading_character) <= kCharacterTol;
    const bool beta_ok = rate.beta == static_cast<int>(cl.order);
    if (!alpha_ok || !beta_ok) {
      std::ostringstream msg;
      msg << "block " << (k + 1) << ": rate (" << rate.alpha << ", " << rate.beta
          << ") vs cluster " << (j + 1) << " (" << cl.leading_character << ", "
          << cl.order << ")";
      result.mismatches.push_back(msg.str());
    }
  }
  result.match = result.mismatches.empty();
  return result;
}

}  // namespace urnlab
