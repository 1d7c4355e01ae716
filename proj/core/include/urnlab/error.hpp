#pragma once

#include <stdexcept>
#include <string>

namespace urnlab {

/// Raised for malformed or out-of-contract user input. `code` is a stable
/// machine-readable tag (e.g. "unbalanced-rows") surfaced by the CLI next to
/// the human-readable message.
class InputError : public std::runtime_error {
 public:
  InputError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Raised when a numeric routine cannot meet its contract (non-convergence,
/// singular solve). Usually means a precondition was violated upstream.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace urnlab
