#pragma once

#include <optional>
#include <vector>

#include "urnlab/canonical.hpp"

namespace urnlab {

enum class LimitKind {
  deterministic,     // zero cluster: counts / log^kappa N -> fixed vector
  random_direction,  // counts / (N^lambda log^kappa N) -> V_j * direction
  stationary,        // last block: counts / N -> stationary distribution
};

struct LimitDescriptor {
  LimitKind kind = LimitKind::deterministic;
  std::size_t cluster = 0;
  Vec vector;  // deterministic limit, direction, or stationary distribution
};

/// Scalar link V_j = w * V_{j-1} between the random limits of consecutive
/// clusters sharing a positive leading character.
struct VLink {
  std::size_t cluster = 0;
  double w = 0.0;
};

struct LimitProfile {
  std::vector<Matrix> w_matrices;   // per block; identity on leading blocks
  std::vector<double> w_constants;  // per cluster; 1 when lambda or kappa is 0
  std::vector<bool> w_defined;      // false where assumption (A) fails
  std::vector<std::optional<LimitDescriptor>> descriptors;  // per block
  std::vector<VLink> v_links;
  bool partial = false;  // some cluster carries no descriptor
};

/// Direction-mixing matrices: identity for every leading block, and for a
/// non-leading block k of cluster j the recursion
///   W_k = sum_{m=i_j}^{k-1} W_m Q_{mk} (lambda_j I - Q_k)^{-1},
/// a d_{i_j} x d_k matrix. Requires only the increasing order.
std::vector<Matrix> w_matrices(const ClusterForm& cf);

/// Cluster link constants: 1 when the leading character or its order is
/// zero, otherwise
///   (1/kappa_j) pi^{(i_{j-1})} [sum_m W_m Q_{m,i_j}] zeta^{(i_j)}
/// over the blocks m of the previous cluster. Clusters where assumption (A)
/// fails are skipped and reported through `defined`.
std::vector<double> w_constants(const ClusterForm& cf, const std::vector<Matrix>& w,
                                std::vector<bool>* defined = nullptr);

/// Full limit description per block: deterministic vectors for zero
/// clusters (by the stepwise recursion L_k = L_{k-1} Q_{k-1,k} / kappa_k),
/// scaled directions pi^{(i_j)} W_k for clusters with leading character in
/// (0,1), and the stationary distribution for the last block. Blocks of
/// clusters violating assumption (A) carry no descriptor and the profile is
/// marked partial.
LimitProfile limit_profile(const ClusterForm& cf);

}  // namespace urnlab
