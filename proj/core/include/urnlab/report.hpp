#pragma once

#include <string>

#include "urnlab/analyze.hpp"
#include "urnlab/verify.hpp"

namespace urnlab {

/// Machine-readable analysis report. Blocks, clusters and colors are
/// numbered from 1; every result is mapped back to original color labels and
/// the permutations are included so canonical positions can be recovered.
/// All logarithms mentioned by the report are natural.
std::string analysis_report_json(const Analysis& analysis, int indent = 2);

std::string convergence_report_json(const ConvergenceReport& report, int indent = 2);

}  // namespace urnlab
