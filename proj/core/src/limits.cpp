#include "urnlab/limits.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace urnlab {

std::vector<Matrix> w_matrices(const ClusterForm& cf) {
  const CanonicalForm& base = cf.base;
  std::vector<Matrix> w(base.block_count());

  for (std::size_t j = 0; j < cf.clusters.size(); ++j) {
    const Cluster& cl = cf.clusters[j];
    const std::size_t lead = cl.leading_block;
    w[lead] = Matrix::identity(base.blocks[lead].size);

    for (std::size_t k = lead + 1; k < lead + cl.block_count; ++k) {
      Matrix acc(base.blocks[lead].size, base.blocks[k].size, 0.0);
      for (std::size_t m = lead; m < k; ++m) {
        if (!base.coupling_nonzero(m, k)) continue;
        acc = acc + w[m] * base.coupling(m, k);
      }
      w[k] = acc * resolvent(cl.leading_character, base.diagonal_block(k));
    }
  }
  return w;
}

std::vector<double> w_constants(const ClusterForm& cf, const std::vector<Matrix>& w,
                                std::vector<bool>* defined) {
  const std::size_t n_clusters = cf.clusters.size();
  std::vector<double> out(n_clusters, 1.0);
  std::vector<bool> ok(n_clusters, true);
  const std::set<std::size_t> violated(cf.assumption_a.violated_clusters.begin(),
                                       cf.assumption_a.violated_clusters.end());

  for (std::size_t j = 0; j < n_clusters; ++j) {
    const Cluster& cl = cf.clusters[j];
    if (cl.leading_character <= kCharacterTol || cl.order == 0) continue;
    if (violated.count(j)) {
      out[j] = std::numeric_limits<double>::quiet_NaN();
      ok[j] = false;
      continue;
    }
    // A repeated positive leading character forces the previous cluster to
    // share it, so both eigenpairs exist.
    const Cluster& prev = cf.clusters[j - 1];
    const Vec& pi = cf.base.blocks[prev.leading_block].eigen->left;
    const Vec& zeta = cf.base.blocks[cl.leading_block].eigen->right;

    double acc = 0.0;
    for (std::size_t m = prev.leading_block; m < prev.leading_block + prev.block_count;
         ++m) {
      if (!cf.base.coupling_nonzero(m, cl.leading_block)) continue;
      acc += dot(pi * (w[m] * cf.base.coupling(m, cl.leading_block)), zeta);
    }
    out[j] = acc / static_cast<double>(cl.order);
  }

  if (defined) *defined = std::move(ok);
  return out;
}

LimitProfile limit_profile(const ClusterForm& cf) {
  const CanonicalForm& base = cf.base;
  LimitProfile profile;
  profile.w_matrices = w_matrices(cf);
  profile.w_constants = w_constants(cf, profile.w_matrices, &profile.w_defined);
  profile.descriptors.resize(base.block_count());

  const std::set<std::size_t> violated(cf.assumption_a.violated_clusters.begin(),
                                       cf.assumption_a.violated_clusters.end());
  profile.partial = !violated.empty();

  // Deterministic limits of the zero clusters, built stepwise:
  // L_1 is the initial composition of the first block and each later zero
  // cluster divides the inflow from its predecessor by its order.
  std::vector<Vec> zero_limits;
  for (std::size_t j = 0; j < cf.clusters.size(); ++j) {
    const Cluster& cl = cf.clusters[j];
    if (cl.leading_character > kCharacterTol) break;
    if (j == 0) {
      zero_limits.push_back(base.block_slice(base.initial, 0));
    } else {
      const Vec inflow = zero_limits[j - 1] * base.coupling(j - 1, j);
      Vec next(inflow.size());
      for (std::size_t i = 0; i < inflow.size(); ++i) {
        next[i] = inflow[i] / static_cast<double>(cl.order);
      }
      zero_limits.push_back(std::move(next));
    }
  }

  for (std::size_t j = 0; j < cf.clusters.size(); ++j) {
    const Cluster& cl = cf.clusters[j];
    if (violated.count(j)) continue;  // no identified limit for this cluster

    const bool last_cluster = (j + 1 == cf.clusters.size());
    for (std::size_t k = cl.leading_block; k < cl.leading_block + cl.block_count; ++k) {
      LimitDescriptor d;
      d.cluster = j;
      if (last_cluster) {
        d.kind = LimitKind::stationary;
        d.vector = base.blocks[k].eigen->left;
      } else if (cl.leading_character <= kCharacterTol) {
        d.kind = LimitKind::deterministic;
        d.vector = zero_limits[j];
      } else {
        d.kind = LimitKind::random_direction;
        const Vec& pi = base.blocks[cl.leading_block].eigen->left;
        d.vector = pi * profile.w_matrices[k];
      }
      profile.descriptors[k] = std::move(d);
    }

    if (cl.leading_character > kCharacterTol && cl.order > 0 && profile.w_defined[j]) {
      profile.v_links.push_back({j, profile.w_constants[j]});
    }
  }
  return profile;
}

}  // namespace urnlab
