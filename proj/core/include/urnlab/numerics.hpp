#pragma once

#include <cstdint>

#include "urnlab/matrix.hpp"

namespace urnlab {

/// Perron-Frobenius eigenpair of an irreducible nonnegative matrix.
/// Normalization: `left` sums to one and left . right = 1, so for a balanced
/// block `left` is its stationary distribution.
struct PFEigenpair {
  double value = 0.0;
  Vec left;
  Vec right;
};

/// Dominant eigenpair by power iteration on Q + I; the shift keeps the
/// dominant eigenvalue strictly separated even for periodic support patterns
/// (a plain 2-cycle alternates under Q alone).
///
/// `tol` bounds the change between successive eigenvalue estimates. The
/// returned pair additionally satisfies both residuals
///   ||left Q - value left||_inf, ||Q right - value right||_inf
///     <= 1e-10 * (1 + value).
/// Throws NumericError when the iteration cap (1e5) is hit first, which in
/// practice means the input was not irreducible or is ill-conditioned.
PFEigenpair pf_eigenpair(const Matrix& q, double tol = 1e-12);

/// (lambda I - Q)^{-1} by partial-pivot elimination. The caller guarantees
/// lambda exceeds the spectral radius of Q, so the result is entrywise
/// nonnegative (strictly positive for irreducible Q). A pivot below 1e-12 or
/// a clearly negative entry in the result signals the precondition was
/// violated and raises NumericError.
Matrix resolvent(double lambda, const Matrix& q);

/// prod_{n=0}^{N-1} (1 + z/(n+1)) for z > -1, evaluated in log space for
/// large N. Grows like N^z / Gamma(z+1).
double rising_product(double z, std::uint64_t n);

/// Gamma(z+1) for z > -1. Lanczos approximation, relative error well below
/// 1e-10; only needed to normalize rising products in checks.
double gamma_plus_one(double z);

}  // namespace urnlab
