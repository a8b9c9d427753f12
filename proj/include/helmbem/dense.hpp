#pragma once

#include <stdexcept>

#include "helmbem/types.hpp"

namespace helmbem {

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DenseSolveResult {
  MatXc X;
  double residual = 0.0;       // ||A X - B|| / ||B|| (Frobenius)
  double condition_estimate = 0.0; // max|U_ii| / min|U_ii| from the LU factor
};

/// Pivoted LU solve of A X = B. Throws SingularMatrixError when a pivot
/// falls below 1e-14 * max|A|. A and B are left untouched.
DenseSolveResult solve_dense(const MatXc& A, const MatXc& B);

/// Same but destroys A in place (avoids the factor copy for big systems).
DenseSolveResult solve_dense_inplace(MatXc& A, const MatXc& B, bool compute_residual = true);

} // namespace helmbem
