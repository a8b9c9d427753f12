#include <doctest.h>

#include <random>

#include "helmbem/dense.hpp"

using namespace helmbem;

TEST_CASE("identity solve returns the right-hand side") {
  const int n = 12;
  const MatXc A = MatXc::Identity(n, n);
  const MatXc B = MatXc::Random(n, 2);
  const auto res = solve_dense(A, B);
  CHECK((res.X - B).norm() < 1e-14);
  CHECK(res.residual < 1e-14);
}

TEST_CASE("well-conditioned random system solves to tight residual") {
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  const int n = 50;
  MatXc A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = cd(dist(rng), dist(rng));
  A.diagonal().array() += 20.0;
  MatXc X_true(n, 1);
  for (int i = 0; i < n; ++i) X_true(i, 0) = cd(dist(rng), dist(rng));
  const MatXc B = A * X_true;
  const auto res = solve_dense(A, B);
  CHECK(res.residual < 1e-12);
  CHECK((res.X - X_true).norm() / X_true.norm() < 1e-10);
}

TEST_CASE("zero row triggers the singular-matrix error") {
  MatXc A = MatXc::Identity(8, 8);
  A.row(3).setZero();
  const MatXc B = MatXc::Ones(8, 1);
  CHECK_THROWS_AS(solve_dense(A, B), SingularMatrixError);
}

TEST_CASE("non-finite input is rejected") {
  MatXc A = MatXc::Identity(4, 4);
  A(1, 2) = cd(std::numeric_limits<double>::infinity(), 0.0);
  CHECK_THROWS_AS(solve_dense(A, MatXc::Ones(4, 1)), std::invalid_argument);
}
