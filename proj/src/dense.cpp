#include "helmbem/dense.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#ifdef HELMBEM_USE_LAPACKE
#include <lapacke.h>
#endif

namespace helmbem {

namespace {

#ifdef HELMBEM_USE_LAPACKE
// Dense solves stay single-threaded in the BLAS so results are identical
// for every --threads setting; parallelism lives in assembly and sweeps.
const bool blas_pin = [] {
  setenv("OPENBLAS_NUM_THREADS", "1", 1);
  setenv("OMP_NUM_THREADS", "1", 0);
  return true;
}();
#endif

struct PivotRange {
  double pmin;
  double pmax;
};

// Factor A in place; returns the |U| diagonal range for the singularity
// check and condition estimate. X starts as B and ends as the solution.
PivotRange lu_solve_inplace(MatXc& A, MatXc& X) {
  const auto n = A.rows();
  PivotRange pr{std::numeric_limits<double>::infinity(), 0.0};

#ifdef HELMBEM_USE_LAPACKE
  std::vector<lapack_int> ipiv(n);
  const lapack_int info = LAPACKE_zgetrf(
      LAPACK_COL_MAJOR, static_cast<lapack_int>(n), static_cast<lapack_int>(n),
      reinterpret_cast<lapack_complex_double*>(A.data()), static_cast<lapack_int>(n),
      ipiv.data());
  if (info < 0) throw std::invalid_argument("solve_dense: bad argument to zgetrf");
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = std::abs(A(i, i));
    pr.pmin = std::min(pr.pmin, p);
    pr.pmax = std::max(pr.pmax, p);
  }
  if (info > 0) pr.pmin = 0.0;
  if (pr.pmin > 0.0)
    LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(n),
                   static_cast<lapack_int>(X.cols()),
                   reinterpret_cast<lapack_complex_double*>(A.data()),
                   static_cast<lapack_int>(n), ipiv.data(),
                   reinterpret_cast<lapack_complex_double*>(X.data()),
                   static_cast<lapack_int>(n));
#else
  Eigen::PartialPivLU<Eigen::Ref<MatXc>> lu(A);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = std::abs(lu.matrixLU()(i, i));
    pr.pmin = std::min(pr.pmin, p);
    pr.pmax = std::max(pr.pmax, p);
  }
  if (pr.pmin > 0.0) X = lu.solve(X);
#endif
  return pr;
}

} // namespace

DenseSolveResult solve_dense_inplace(MatXc& A, const MatXc& B, bool compute_residual) {
  if (A.rows() != A.cols()) throw std::invalid_argument("solve_dense: A must be square");
  if (B.rows() != A.rows()) throw std::invalid_argument("solve_dense: size mismatch");
  if (!A.allFinite()) throw std::invalid_argument("solve_dense: non-finite entries in A");

  const auto n = A.rows();
  const double scale = A.cwiseAbs().maxCoeff();

  // keep a handful of rows so a residual survives the in-place factorization
  const Eigen::Index nsample = compute_residual ? std::min<Eigen::Index>(n, 32) : 0;
  MatXc rows_A(nsample, n);
  MatXc rows_B(nsample, B.cols());
  std::vector<Eigen::Index> sample(nsample);
  for (Eigen::Index s = 0; s < nsample; ++s) {
    sample[s] = (s * n) / std::max<Eigen::Index>(nsample, 1);
    rows_A.row(s) = A.row(sample[s]);
    rows_B.row(s) = B.row(sample[s]);
  }

  DenseSolveResult out;
  out.X = B;
  const PivotRange pr = lu_solve_inplace(A, out.X);
  if (pr.pmin <= 1e-14 * scale)
    throw SingularMatrixError("solve_dense: matrix is singular to working precision");
  out.condition_estimate = pr.pmax / pr.pmin;

  if (compute_residual && nsample > 0) {
    const double bnorm = rows_B.norm();
    out.residual = (rows_A * out.X - rows_B).norm() / (bnorm > 0.0 ? bnorm : 1.0);
  }
  return out;
}

DenseSolveResult solve_dense(const MatXc& A, const MatXc& B) {
  MatXc Acopy = A;
  DenseSolveResult out = solve_dense_inplace(Acopy, B, false);
  const double bnorm = B.norm();
  out.residual = (bnorm > 0.0) ? (A * out.X - B).norm() / bnorm : (A * out.X).norm();
  return out;
}

} // namespace helmbem
