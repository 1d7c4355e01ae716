#pragma once

#include <string>

#include "urnlab/matrix.hpp"

namespace urnlab {

inline constexpr double kRowSumTol = 1e-9;
inline constexpr double kInitialSumTol = 1e-12;

/// Validated urn model input: a nonnegative replacement matrix whose rows all
/// sum to one (each row is divided by its own sum to strip input slop up to
/// kRowSumTol) and a strictly positive initial composition summing to one.
///
/// Structural zeros must be written as exact zeros: every reducibility
/// decision downstream tests entries against zero exactly, and row
/// normalization preserves exact zeros.
class ReplacementSpec {
 public:
  /// Validates and normalizes. Throws InputError with codes "shape",
  /// "nonfinite", "negative-entry", "unbalanced-rows", "initial-nonpositive"
  /// or "initial-unnormalized".
  static ReplacementSpec validated(Matrix matrix, Vec initial);

  const Matrix& matrix() const noexcept { return matrix_; }
  const Vec& initial() const noexcept { return initial_; }
  std::size_t colors() const noexcept { return matrix_.rows(); }

  /// Common row sum after normalization.
  double row_sum() const noexcept { return 1.0; }

 private:
  ReplacementSpec(Matrix matrix, Vec initial)
      : matrix_(std::move(matrix)), initial_(std::move(initial)) {}

  Matrix matrix_;
  Vec initial_;
};

/// (1/D, ..., 1/D); the neutral choice when an input format carries no
/// initial composition.
Vec uniform_initial(std::size_t colors);

/// JSON object with "matrix" (array of rows) and optional "initial".
ReplacementSpec spec_from_json_text(const std::string& text);

/// Plain CSV: one matrix row per line. Initial composition defaults to
/// uniform.
ReplacementSpec spec_from_csv_text(const std::string& text);

/// Dispatches on content: files whose first non-space byte is '{' are parsed
/// as JSON, everything else as CSV.
ReplacementSpec load_spec_file(const std::string& path);

}  // namespace urnlab
