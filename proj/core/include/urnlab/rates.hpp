#pragma once

#include <string>
#include <vector>

#include "urnlab/canonical.hpp"

namespace urnlab {

/// Growth rate of a block's color counts: the counts divided by
/// N^alpha * log^beta N converge. Ordering is lexicographic.
struct RatePair {
  double alpha = 0.0;
  int beta = 0;

  friend bool operator==(const RatePair&, const RatePair&) = default;
};

/// Lexicographic comparison; alphas closer than tol compare equal and defer
/// to beta.
bool rate_less(const RatePair& a, const RatePair& b, double tol = kCharacterTol);

struct RatePlan {
  std::vector<RatePair> pairs;  // one per block of source_form
  CanonicalForm source_form;
};

/// Rate pairs for every diagonal block, computed inductively: the first block
/// grows like its character; each later block takes the lexicographic maximum
/// over the rates feeding it (an empty feed set acts as an absent value, not
/// a numeric sentinel) and bumps beta when its own character ties that
/// maximum. Zero diagonal blocks of any size are accepted; the canonical form
/// from block_order keeps them scalar.
RatePlan rate_pairs(const CanonicalForm& canon);

struct CrossCheck {
  bool match = true;
  std::vector<std::string> mismatches;
};

/// Confirms that the inductive rates coincide with the per-cluster values
/// (leading character, order) on the increasing-order form. The two
/// computations agree whenever assumption (A) holds, so a mismatch flags an
/// implementation bug. Blocks are matched across the two permutations by
/// their original colors.
CrossCheck cross_check_cluster_rates(const RatePlan& plan, const ClusterForm& cf);

}  // namespace urnlab
