#pragma once

#include <optional>
#include <string>
#include <vector>

#include "urnlab/limits.hpp"
#include "urnlab/rates.hpp"

namespace urnlab {

struct Warning {
  std::string kind;  // stable tag, e.g. "character-near-tie"
  std::string message;
};

/// Everything the structural pipeline produces for one replacement spec:
/// canonical form, increasing order with clusters and the assumption-(A)
/// verdict, the rate plan, the rate/cluster cross-check (when meaningful)
/// and the limit profile.
struct Analysis {
  ReplacementSpec spec;
  CanonicalForm canonical;
  ClusterForm cluster_form;
  RatePlan plan;
  std::optional<CrossCheck> cross_check;  // run only when assumption (A) holds
  LimitProfile limits;
  std::vector<Warning> warnings;
};

Analysis analyze(const ReplacementSpec& spec);

}  // namespace urnlab
