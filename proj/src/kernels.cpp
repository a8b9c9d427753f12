#include "helmbem/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace helmbem {

namespace {
constexpr int series_terms = 14;
}

cd cancellation_c1(cd u) {
  if (std::abs(u) < series_switchover) {
    // sum_{m>=2} u^m (m-1)/m!
    cd term = u * u; // u^2, factor (m-1)/m! applied incrementally
    cd sum = 0.0;
    double fact = 2.0; // 2!
    for (int m = 2; m <= series_terms; ++m) {
      sum += term * ((m - 1.0) / fact);
      term *= u;
      fact *= (m + 1.0);
    }
    return sum;
  }
  return (u - 1.0) * std::exp(u) + 1.0;
}

cd cancellation_c2(cd u) {
  if (std::abs(u) < series_switchover) {
    // sum_{m>=2} u^m (m-1)(m-3)/m!
    cd term = u * u;
    cd sum = 0.0;
    double fact = 2.0;
    for (int m = 2; m <= series_terms; ++m) {
      sum += term * ((m - 1.0) * (m - 3.0) / fact);
      term *= u;
      fact *= (m + 1.0);
    }
    return sum;
  }
  return (u * u - 3.0 * u + 3.0) * std::exp(u) - 3.0;
}

cd delta_g(cd k, double r) {
  const cd u = iu * k * r;
  if (std::abs(u) < series_switchover) {
    cd term = u;
    cd sum = 0.0;
    double fact = 1.0;
    for (int m = 1; m <= series_terms; ++m) {
      sum += term / fact;
      term *= u;
      fact *= (m + 1.0);
    }
    return sum / r;
  }
  return (std::exp(u) - 1.0) / r;
}

KernelEval eval_kernels(const Vec3& x, const Vec3& x0, cd k,
                        const Vec3& n, const Vec3& n0) {
  const Vec3 d = x - x0;
  const double r2 = d.squaredNorm();
  if (r2 == 0.0) throw std::domain_error("eval_kernels: coincident points");
  const double r = std::sqrt(r2);
  const double inv_r = 1.0 / r;
  const double inv_r3 = inv_r * inv_r * inv_r;

  const cd u = iu * k * r;
  const cd eikr = std::exp(u);
  const double dn = d.dot(n);
  const double dn0 = d.dot(n0);

  KernelEval out;
  out.g_0 = inv_r;
  out.g_k = eikr * inv_r;
  out.dg0_dn = -dn * inv_r3;
  out.dgk_dn = (u - 1.0) * eikr * dn * inv_r3;
  out.dgk_dn0 = (1.0 - u) * eikr * dn0 * inv_r3;

  const cd c1 = cancellation_c1(u);
  const cd c2 = cancellation_c2(u);
  out.d2_diff = -n.dot(n0) * c1 * inv_r3 - dn * dn0 * c2 * inv_r3 * inv_r * inv_r;
  return out;
}

RegularizedLimit regularized_limit(cd k, const Vec3& n, const Vec3& n0) {
  RegularizedLimit out;
  out.delta_g = iu * k;
  out.dgn_coeff = -0.5 * k * k;
  out.d2_times_r = 0.5 * k * k * n.dot(n0);
  return out;
}

} // namespace helmbem
