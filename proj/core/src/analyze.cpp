#include "urnlab/analyze.hpp"

#include <cmath>
#include <sstream>

namespace urnlab {

Analysis analyze(const ReplacementSpec& spec) {
  Analysis a{spec,
             block_order(spec),
             {},
             {},
             std::nullopt,
             {},
             {}};
  a.cluster_form = increasing_order(a.canonical);
  a.plan = rate_pairs(a.canonical);
  a.limits = limit_profile(a.cluster_form);

  if (a.cluster_form.assumption_a.holds) {
    a.cross_check = cross_check_cluster_rates(a.plan, a.cluster_form);
    if (!a.cross_check->match) {
      for (const std::string& m : a.cross_check->mismatches) {
        a.warnings.push_back({"rate-cluster-mismatch", m});
      }
    }
  } else {
    for (std::size_t j : a.cluster_form.assumption_a.violated_clusters) {
      std::ostringstream msg;
      msg << "assumption (A) violated at cluster " << (j + 1)
          << "; its limits are not identified";
      a.warnings.push_back({"assumption-a-violated", msg.str()});
    }
  }

  // Characters separated by more than the comparison tolerance but less than
  // 1e-6 are suspicious: a 1e-12 perturbation of analytically equal
  // eigenvalues would flip a beta by one. Surface them instead of choosing
  // silently.
  const auto& blocks = a.canonical.blocks;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (std::size_t l = k + 1; l < blocks.size(); ++l) {
      const double delta = std::abs(blocks[k].character - blocks[l].character);
      if (delta > kCharacterTol && delta <= 1e-6) {
        std::ostringstream msg;
        msg << "characters of blocks " << (k + 1) << " and " << (l + 1)
            << " differ by " << delta << "; treated as distinct";
        a.warnings.push_back({"character-near-tie", msg.str()});
      } else if (delta > 1e-12 && delta <= kCharacterTol) {
        std::ostringstream msg;
        msg << "characters of blocks " << (k + 1) << " and " << (l + 1)
            << " differ by " << delta << "; treated as equal";
        a.warnings.push_back({"character-near-tie", msg.str()});
      }
    }
  }
  return a;
}

}  // namespace urnlab
