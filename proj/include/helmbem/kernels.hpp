#pragma once

#include "helmbem/types.hpp"

namespace helmbem {

/// Helmholtz and Laplace free-space kernels and the regularised
/// differences between them, at one (field point, source point) pair.
///
/// G_k = exp(ik r)/r, G_0 = 1/r, r = |x - x0|. Normal derivatives are
/// taken along n(x); the n0-derivative acts on x0 and carries the sign
/// flip from differentiating r with respect to x0.
struct KernelEval {
  cd g_k;       // G_k
  double g_0;   // G_0
  cd dgk_dn;    // dG_k/dn(x)
  double dg0_dn; // dG_0/dn(x)
  cd dgk_dn0;   // dG_k/dn0
  cd d2_diff;   // d2G_k/dn dn0 - d2G_0/dn dn0  (weakly singular, ~k^2/(2r))
};

/// Coincident-point limits of the regularised combinations.
struct RegularizedLimit {
  cd delta_g;    // lim (G_k - G_0) = i k
  cd dgn_coeff;  // lim ([ikr-1]e^{ikr}+1)/r^2 = -k^2/2
                 //   (the r^2-normalised coefficient of (x-x0).n/r^3 in
                 //    dG_k/dn - dG_0/dn)
  cd d2_times_r; // lim r*(d2-difference) = (k^2/2)(n.n0)
};

/// Evaluate all kernels. Throws std::domain_error when x == x0; use
/// regularized_limit for coincident points.
KernelEval eval_kernels(const Vec3& x, const Vec3& x0, cd k,
                        const Vec3& n, const Vec3& n0);

RegularizedLimit regularized_limit(cd k, const Vec3& n, const Vec3& n0);

/// (e^{ikr}-1)/r, series-evaluated for small |k r| to avoid cancellation.
cd delta_g(cd k, double r);

/// c1 = (u-1)e^u + 1 and c2 = (u^2-3u+3)e^u - 3 with u = ikr; both are
/// O(u^2) and switch to series evaluation below |u| = 1e-2. These carry
/// the cancellation-sensitive parts of the kernel differences:
///   dG_k/dn - dG_0/dn = c1 * [(x-x0).n] / r^3
///   d2-difference     = -(n.n0) c1 / r^3 - [(x-x0).n][(x-x0).n0] c2 / r^5
cd cancellation_c1(cd u);
cd cancellation_c2(cd u);

/// |u| below which the series branches engage.
inline constexpr double series_switchover = 1e-2;

} // namespace helmbem
