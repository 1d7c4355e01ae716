#include "urnlab/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace urnlab {

Matrix CanonicalForm::coupling(std::size_t k, std::size_t l) const {
  const Block& bk = blocks[k];
  const Block& bl = blocks[l];
  return matrix.block(bk.offset, bl.offset, bk.size, bl.size);
}

bool CanonicalForm::coupling_nonzero(std::size_t k, std::size_t l) const {
  const Block& bk = blocks[k];
  const Block& bl = blocks[l];
  for (std::size_t r = 0; r < bk.size; ++r) {
    for (std::size_t c = 0; c < bl.size; ++c) {
      if (matrix(bk.offset + r, bl.offset + c) != 0.0) return true;
    }
  }
  return false;
}

Matrix CanonicalForm::diagonal_block(std::size_t k) const { return coupling(k, k); }

std::vector<std::size_t> CanonicalForm::original_colors(std::size_t k) const {
  const Block& b = blocks[k];
  return {permutation.begin() + static_cast<std::ptrdiff_t>(b.offset),
          permutation.begin() + static_cast<std::ptrdiff_t>(b.offset + b.size)};
}

Vec CanonicalForm::block_slice(const Vec& v, std::size_t k) const {
  const Block& b = blocks[k];
  return {v.begin() + static_cast<std::ptrdiff_t>(b.offset),
          v.begin() + static_cast<std::ptrdiff_t>(b.offset + b.size)};
}

namespace {

// Transitive closure over paths of length >= 1 (Warshall on the support
// digraph). reach[i][i] is true only when i lies on a cycle.
std::vector<std::vector<bool>> reachability(const Matrix& r) {
  const std::size_t d = r.rows();
  std::vector<std::vector<bool>> reach(d, std::vector<bool>(d, false));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) reach[i][j] = r(i, j) != 0.0;
  }
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  return reach;
}

Matrix permute(const Matrix& m, const std::vector<std::size_t>& perm) {
  const std::size_t d = perm.size();
  Matrix out(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) out(r, c) = m(perm[r], perm[c]);
  }
  return out;
}

Vec permute(const Vec& v, const std::vector<std::size_t>& perm) {
  Vec out(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[i] = v[perm[i]];
  return out;
}

}  // namespace

ColorClasses classify_colors(const ReplacementSpec& spec) {
  const std::size_t d = spec.colors();
  const auto reach = reachability(spec.matrix());

  ColorClasses out;
  std::vector<bool> assigned(d, false);
  for (std::size_t i = 0; i < d; ++i) {
    if (assigned[i]) continue;
    if (!reach[i][i]) {
      out.lone_colors.push_back(i);
      assigned[i] = true;
      continue;
    }
    std::vector<std::size_t> cls;
    for (std::size_t j = i; j < d; ++j) {
      if (!assigned[j] && reach[i][j] && reach[j][i]) {
        cls.push_back(j);
        assigned[j] = true;
      }
    }
    out.classes.push_back(std::move(cls));
  }
  return out;
}

CanonicalForm block_order(const ReplacementSpec& spec) {
  const std::size_t d = spec.colors();
  const auto reach = reachability(spec.matrix());
  const ColorClasses classes = classify_colors(spec);

  // Units to sort: communicating classes plus one singleton per lone color.
  struct Unit {
    std::vector<std::size_t> colors;  // ascending original ids
    BlockKind kind;
  };
  std::vector<Unit> units;
  for (const auto& cls : classes.classes) units.push_back({cls, BlockKind::irreducible});
  for (std::size_t lone : classes.lone_colors) units.push_back({{lone}, BlockKind::zero});

  const std::size_t n_units = units.size();
  std::vector<std::size_t> unit_of(d);
  for (std::size_t u = 0; u < n_units; ++u) {
    for (std::size_t c : units[u].colors) unit_of[c] = u;
  }

  // "Leads to" between distinct units, via reachability.
  std::vector<std::vector<bool>> edge(n_units, std::vector<bool>(n_units, false));
  std::vector<std::size_t> indegree(n_units, 0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (!reach[i][j]) continue;
      const std::size_t u = unit_of[i];
      const std::size_t v = unit_of[j];
      if (u != v && !edge[u][v]) {
        edge[u][v] = true;
        ++indegree[v];
      }
    }
  }

  // Kahn with deterministic tie-break: among ready units, the one holding the
  // smallest original color goes first. Classes that lead to others come
  // first, giving the block upper triangular shape.
  std::vector<std::size_t> order;
  order.reserve(n_units);
  std::vector<bool> placed(n_units, false);
  for (std::size_t step = 0; step < n_units; ++step) {
    std::size_t best = n_units;
    for (std::size_t u = 0; u < n_units; ++u) {
      if (placed[u] || indegree[u] != 0) continue;
      if (best == n_units || units[u].colors.front() < units[best].colors.front()) best = u;
    }
    if (best == n_units) {
      throw std::logic_error("block_order: cycle among distinct classes");
    }
    placed[best] = true;
    order.push_back(best);
    for (std::size_t v = 0; v < n_units; ++v) {
      if (edge[best][v]) --indegree[v];
    }
  }

  CanonicalForm form;
  form.permutation.reserve(d);
  std::size_t offset = 0;
  for (std::size_t u : order) {
    Block b;
    b.offset = offset;
    b.size = units[u].colors.size();
    b.kind = units[u].kind;
    form.blocks.push_back(b);
    form.permutation.insert(form.permutation.end(), units[u].colors.begin(),
                            units[u].colors.end());
    offset += b.size;
  }
  form.matrix = permute(spec.matrix(), form.permutation);
  form.initial = permute(spec.initial(), form.permutation);

  for (Block& b : form.blocks) {
    if (b.kind == BlockKind::irreducible) {
      b.eigen = pf_eigenpair(form.matrix.block(b.offset, b.offset, b.size, b.size));
      b.character = b.eigen->value;
    } else {
      b.character = 0.0;
    }
  }

  // Internal consistency: strictly lower blocks vanish, characters stay in
  // [0, 1], and the last block is balanced with character one.
  for (std::size_t k = 0; k < form.blocks.size(); ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      if (form.coupling_nonzero(k, l)) {
        throw std::logic_error("block_order: arrangement is not block upper triangular");
      }
    }
    if (form.blocks[k].character > 1.0 + kCharacterTol) {
      throw std::logic_error("block_order: block character exceeds one");
    }
  }
  if (std::abs(form.blocks.back().character - 1.0) > kCharacterTol) {
    throw std::logic_error("block_order: last block character is not one");
  }
  return form;
}

namespace {

struct GreedyOrder {
  std::vector<std::size_t> order;  // new position -> old block index
};

// First rearrangement step: order whole blocks so that every non-leading
// block receives nonzero coupling from earlier blocks of its own cluster.
// A new cluster opens at the available block of smallest character; the
// cluster then greedily absorbs the earliest available block of strictly
// smaller character that is fed by the members placed so far.
GreedyOrder rearrange_blocks(const CanonicalForm& canon) {
  const std::size_t n = canon.block_count();
  std::vector<std::vector<bool>> feeds(n, std::vector<bool>(n, false));
  std::vector<std::size_t> pending(n, 0);  // unplaced predecessors
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m + 1; k < n; ++k) {
      if (canon.coupling_nonzero(m, k)) {
        feeds[m][k] = true;
        ++pending[k];
      }
    }
  }

  std::vector<bool> done(n, false);
  GreedyOrder out;
  out.order.reserve(n);

  auto place = [&](std::size_t b) {
    done[b] = true;
    out.order.push_back(b);
    for (std::size_t k = b + 1; k < n; ++k) {
      if (feeds[b][k]) --pending[k];
    }
  };

  std::size_t placed = 0;
  while (placed < n) {
    // Open a cluster at the smallest available character.
    std::size_t lead = n;
    for (std::size_t b = 0; b < n; ++b) {
      if (done[b] || pending[b] != 0) continue;
      if (lead == n ||
          canon.blocks[b].character < canon.blocks[lead].character - kCharacterTol) {
        lead = b;
      }
    }
    if (lead == n) {
      throw std::logic_error("increasing_order: no available block");
    }
    const double lambda = canon.blocks[lead].character;
    std::vector<std::size_t> members{lead};
    place(lead);
    ++placed;

    for (;;) {
      std::size_t next = n;
      for (std::size_t b = 0; b < n; ++b) {
        if (done[b] || pending[b] != 0) continue;
        if (canon.blocks[b].character >= lambda - kCharacterTol) continue;
        bool fed = false;
        for (std::size_t m : members) {
          if (feeds[m][b]) {
            fed = true;
            break;
          }
        }
        if (fed) {
          next = b;
          break;
        }
      }
      if (next == n) break;
      members.push_back(next);
      place(next);
      ++placed;
    }
  }
  return out;
}

// Second step: the initial run of zero diagonal blocks is regrouped so that
// each group is fed column by column from the previous one. Works on
// original color ids; within each group colors sort ascending.
std::vector<std::vector<std::size_t>> coalesce_zero_prefix(
    const Matrix& original, const std::vector<std::vector<std::size_t>>& zero_blocks) {
  std::vector<std::size_t> states;
  for (const auto& zb : zero_blocks) {
    states.insert(states.end(), zb.begin(), zb.end());
  }

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> remaining = states;
  std::vector<bool> placed_state(original.rows(), false);

  while (!remaining.empty()) {
    std::vector<std::size_t> group;
    for (std::size_t s : remaining) {
      bool ready = true;
      for (std::size_t t : states) {
        if (original(t, s) != 0.0 && !placed_state[t]) {
          ready = false;
          break;
        }
      }
      if (ready) group.push_back(s);
    }
    if (group.empty()) {
      throw std::logic_error("increasing_order: zero-block coalescing stalled");
    }
    std::sort(group.begin(), group.end());
    for (std::size_t s : group) placed_state[s] = true;
    std::vector<std::size_t> rest;
    for (std::size_t s : remaining) {
      if (!placed_state[s]) rest.push_back(s);
    }
    remaining = std::move(rest);
    groups.push_back(std::move(group));
  }
  return groups;
}

std::vector<Cluster> build_clusters(const std::vector<Block>& blocks) {
  std::vector<Cluster> clusters;
  double running_max = -1.0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const double mu = blocks[k].character;
    if (k == 0 || mu > running_max - kCharacterTol) {
      Cluster c;
      c.leading_block = k;
      c.block_count = 1;
      c.leading_character = mu;
      c.order = 0;
      for (std::size_t b = 0; b < k; ++b) {
        if (std::abs(blocks[b].character - mu) <= kCharacterTol) ++c.order;
      }
      clusters.push_back(c);
      running_max = std::max(running_max, mu);
    } else {
      ++clusters.back().block_count;
    }
  }
  return clusters;
}

}  // namespace

std::size_t ClusterForm::cluster_of(std::size_t block) const {
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    if (block >= clusters[j].leading_block &&
        block < clusters[j].leading_block + clusters[j].block_count) {
      return j;
    }
  }
  throw std::out_of_range("ClusterForm::cluster_of: no such block");
}

ClusterForm increasing_order(const CanonicalForm& canon) {
  const GreedyOrder greedy = rearrange_blocks(canon);

  // Recover the original-order matrix so entries can be re-permuted exactly.
  const std::size_t d = canon.color_count();
  std::vector<std::size_t> inverse(d);
  for (std::size_t pos = 0; pos < d; ++pos) inverse[canon.permutation[pos]] = pos;
  Matrix original(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      original(i, j) = canon.matrix(inverse[i], inverse[j]);
    }
  }
  Vec original_initial(d);
  for (std::size_t i = 0; i < d; ++i) original_initial[i] = canon.initial[inverse[i]];

  // Leading zero blocks are exactly the initial run of zero blocks after the
  // first rearrangement; coalesce them.
  std::size_t zero_run = 0;
  while (zero_run < greedy.order.size() &&
         canon.blocks[greedy.order[zero_run]].kind == BlockKind::zero) {
    ++zero_run;
  }
  std::vector<std::vector<std::size_t>> zero_blocks;
  for (std::size_t i = 0; i < zero_run; ++i) {
    zero_blocks.push_back(canon.original_colors(greedy.order[i]));
  }
  const auto zero_groups = coalesce_zero_prefix(original, zero_blocks);

  ClusterForm cf;
  CanonicalForm& base = cf.base;
  std::size_t offset = 0;
  for (const auto& group : zero_groups) {
    Block b;
    b.offset = offset;
    b.size = group.size();
    b.kind = BlockKind::zero;
    b.character = 0.0;
    base.blocks.push_back(b);
    base.permutation.insert(base.permutation.end(), group.begin(), group.end());
    offset += b.size;
  }
  for (std::size_t i = zero_run; i < greedy.order.size(); ++i) {
    const Block& src = canon.blocks[greedy.order[i]];
    Block b = src;  // keeps kind, character and the eigenpair
    b.offset = offset;
    base.blocks.push_back(b);
    const auto colors = canon.original_colors(greedy.order[i]);
    base.permutation.insert(base.permutation.end(), colors.begin(), colors.end());
    offset += b.size;
  }

  base.matrix = permute(original, base.permutation);
  base.initial = permute(original_initial, base.permutation);

  cf.clusters = build_clusters(base.blocks);
  cf.assumption_a = check_assumption_a(cf);
  return cf;
}

AssumptionA check_assumption_a(const ClusterForm& cf) {
  AssumptionA verdict;
  for (std::size_t j = 1; j < cf.clusters.size(); ++j) {
    const Cluster& cl = cf.clusters[j];
    if (cl.leading_character <= kCharacterTol || cl.order == 0) continue;
    const Cluster& prev = cf.clusters[j - 1];
    bool coupled = false;
    for (std::size_t m = prev.leading_block; m < prev.leading_block + prev.block_count;
         ++m) {
      if (cf.base.coupling_nonzero(m, cl.leading_block)) {
        coupled = true;
        break;
      }
    }
    if (!coupled) verdict.violated_clusters.push_back(j);
  }
  verdict.holds = verdict.violated_clusters.empty();
  return verdict;
}

void validate_increasing_order(const ClusterForm& cf) {
  const CanonicalForm& base = cf.base;
  auto fail = [](const std::string& what) { throw std::logic_error("increasing order: " + what); };

  for (std::size_t k = 0; k < base.block_count(); ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      if (base.coupling_nonzero(k, l)) fail("not block upper triangular");
    }
  }

  for (std::size_t j = 0; j < cf.clusters.size(); ++j) {
    const Cluster& cl = cf.clusters[j];
    for (std::size_t k = cl.leading_block + 1; k < cl.leading_block + cl.block_count; ++k) {
      const Block& b = base.blocks[k];
      // Non-leading zero diagonal blocks must stay scalar.
      if (b.kind == BlockKind::zero && b.size != 1) {
        std::ostringstream msg;
        msg << "non-leading zero block " << k << " is not scalar";
        fail(msg.str());
      }
      bool fed = false;
      for (std::size_t m = cl.leading_block; m < k; ++m) {
        if (base.coupling_nonzero(m, k)) fed = true;
      }
      if (!fed) {
        std::ostringstream msg;
        msg << "non-leading block " << k << " receives nothing from its cluster";
        fail(msg.str());
      }
    }
    // Repeated zero leading characters need column-wise coupling from the
    // previous block.
    if (j > 0 && cl.leading_character <= kCharacterTol && cl.order > 0) {
      const Block& prev = base.blocks[cl.leading_block - 1];
      const Block& lead = base.blocks[cl.leading_block];
      for (std::size_t c = 0; c < lead.size; ++c) {
        bool nonzero = false;
        for (std::size_t r = 0; r < prev.size; ++r) {
          if (base.matrix(prev.offset + r, lead.offset + c) != 0.0) nonzero = true;
        }
        if (!nonzero) {
          std::ostringstream msg;
          msg << "zero cluster " << j << " has a zero column from its predecessor";
          fail(msg.str());
        }
      }
    }
  }

  // Leading zero clusters sit at the very beginning, one block each.
  bool seen_positive = false;
  for (std::size_t j = 0; j < cf.clusters.size(); ++j) {
    if (cf.clusters[j].leading_character > kCharacterTol) {
      seen_positive = true;
    } else if (seen_positive) {
      fail("zero cluster after a positive one");
    }
  }
}

}  // namespace urnlab
