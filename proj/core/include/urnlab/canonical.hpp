#pragma once

#include <optional>
#include <vector>

#include "urnlab/numerics.hpp"
#include "urnlab/replacement.hpp"

namespace urnlab {

/// Two characters closer than this are treated as equal when building
/// clusters and comparing rate pairs. Analytically equal Perron-Frobenius
/// eigenvalues reach us through floating point.
inline constexpr double kCharacterTol = 1e-9;

/// Communicating classes of the color digraph (edge i -> j iff r_ij > 0).
/// A class is a strongly connected set lying on a cycle; colors on no cycle
/// are lone colors and end up as scalar zero diagonal blocks.
struct ColorClasses {
  std::vector<std::vector<std::size_t>> classes;  // each sorted ascending
  std::vector<std::size_t> lone_colors;           // sorted ascending
};

ColorClasses classify_colors(const ReplacementSpec& spec);

enum class BlockKind { irreducible, zero };

/// One diagonal block of a block upper triangular arrangement.
struct Block {
  std::size_t offset = 0;  // first position of the block in the arrangement
  std::size_t size = 0;
  BlockKind kind = BlockKind::zero;
  double character = 0.0;            // PF eigenvalue, or 0 for a zero block
  std::optional<PFEigenpair> eigen;  // present iff irreducible
};

/// A permutation-similar arrangement of the replacement matrix that is block
/// upper triangular with irreducible-or-zero diagonal blocks. block_order()
/// produces only scalar zero blocks; increasing_order() may coalesce leading
/// zero blocks into larger ones.
struct CanonicalForm {
  std::vector<std::size_t> permutation;  // position -> original color
  Matrix matrix;                         // permuted replacement matrix
  Vec initial;                           // permuted initial composition
  std::vector<Block> blocks;

  std::size_t color_count() const noexcept { return permutation.size(); }
  std::size_t block_count() const noexcept { return blocks.size(); }

  /// Coupling submatrix Q_{kl} between diagonal blocks k and l.
  Matrix coupling(std::size_t k, std::size_t l) const;
  bool coupling_nonzero(std::size_t k, std::size_t l) const;
  Matrix diagonal_block(std::size_t k) const;

  /// Original color ids of block k, in block-internal order.
  std::vector<std::size_t> original_colors(std::size_t k) const;
  /// Slice of a vector laid out in this arrangement.
  Vec block_slice(const Vec& v, std::size_t k) const;
};

/// Topologically sorts the communicating classes (classes that lead to others
/// come first; ties broken by smallest original color) and emits the block
/// upper triangular form with per-block characters. Deterministic.
CanonicalForm block_order(const ReplacementSpec& spec);

/// A maximal run of blocks dominated by one leading block. The leading block
/// sits at a running maximum of the characters; `order` counts how many
/// earlier blocks share its character.
struct Cluster {
  std::size_t leading_block = 0;
  std::size_t block_count = 0;
  double leading_character = 0.0;  // lambda_j
  std::size_t order = 0;           // kappa_j
};

/// Result of testing the cross-cluster coupling condition: every cluster
/// whose positive leading character repeats an earlier one must receive
/// nonzero coupling from the previous cluster. Required to identify limits.
struct AssumptionA {
  bool holds = true;
  std::vector<std::size_t> violated_clusters;  // cluster indices, 0-based
};

struct ClusterForm {
  CanonicalForm base;  // re-permuted; only leading zero blocks may exceed 1x1
  std::vector<Cluster> clusters;
  AssumptionA assumption_a;

  std::size_t cluster_of(std::size_t block) const;
  /// Blocks [leading_block, leading_block + block_count) of cluster j.
  const Cluster& cluster(std::size_t j) const { return clusters[j]; }
};

/// Rearranges a canonical form into the increasing order: every non-leading
/// block receives nonzero coupling from earlier blocks of its own cluster,
/// and leading zero blocks are coalesced so that consecutive zero clusters
/// are linked column by column. Cluster structure and the assumption-(A)
/// verdict come out alongside.
ClusterForm increasing_order(const CanonicalForm& canon);

AssumptionA check_assumption_a(const ClusterForm& cf);

/// Internal-consistency check of the increasing-order conditions; throws
/// std::logic_error with a description when one fails.
void validate_increasing_order(const ClusterForm& cf);

}  // namespace urnlab
