#include <doctest.h>

#include <cmath>

#include "helmbem/oracles.hpp"

using namespace helmbem;
using namespace helmbem::oracles;

namespace {

// brute-force power series, independent of the recurrences under test:
// j_n(x) = sum_m (-1)^m x^(n+2m) / (2^m m! (2n+2m+1)!!)
double jn_series(int n, double x) {
  double sum = 0.0;
  double dblfact = 1.0;
  for (int i = 1; i <= 2 * n + 1; i += 2) dblfact *= i;
  double term = std::pow(x, n) / dblfact;
  for (int m = 0; m < 200; ++m) {
    sum += term;
    term *= -x * x / (2.0 * (m + 1.0) * (2.0 * n + 2.0 * m + 3.0));
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

} // namespace

TEST_CASE("spherical Bessel recurrences against the power series") {
  for (int n : {0, 1, 5}) {
    for (double x : {0.5, 3.2}) {
      const auto j = sph_jn(n, x);
      CHECK(j[n] == doctest::Approx(jn_series(n, x)).epsilon(1e-10));
    }
  }
  // y_n cross-checked through the Wronskian j_n y_n' - j_n' y_n = 1/x^2
  for (double x : {0.5, 3.2, 11.0}) {
    const int n = 4;
    const auto j = sph_jn(n + 1, x);
    const auto y = sph_yn(n + 1, x);
    const double dj = j[n - 1] - (n + 1.0) / x * j[n];
    const double dy = y[n - 1] - (n + 1.0) / x * y[n];
    CHECK(j[n] * dy - dj * y[n] == doctest::Approx(1.0 / (x * x)).epsilon(1e-10));
  }
}

TEST_CASE("rigid sphere series basics") {
  SUBCASE("Rayleigh limit") {
    // near-field low-frequency response is the blocked-flow dipole,
    // |phi_sc| ~ ka * cos(theta) / (2 (r/a)^2), linear in ka
    const double v1 = std::abs(rigid_sphere_scatter(1e-4, 2.0, 0.3));
    const double v2 = std::abs(rigid_sphere_scatter(2e-4, 2.0, 0.3));
    CHECK(v1 == doctest::Approx(1e-4 * std::cos(0.3) / 8.0).epsilon(1e-3));
    CHECK(v2 / v1 == doctest::Approx(2.0).epsilon(1e-3));
  }
  SUBCASE("truncation invariance") {
    SeriesConfig c40{40, 0.0}, c60{60, 0.0};
    const cd a = rigid_sphere_scatter(1.01 * M_PI, 1.2, 0.0, c40);
    const cd b = rigid_sphere_scatter(1.01 * M_PI, 1.2, 0.0, c60);
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
  }
  SUBCASE("axisymmetry") {
    const cd a = rigid_sphere_scatter(2.0, 1.5, 0.7);
    const cd b = rigid_sphere_scatter(2.0, 1.5, -0.7);
    CHECK(std::abs(a - b) < 1e-14 * std::abs(a));
  }
}

TEST_CASE("PEC Mie sanity") {
  const Vec3 dir(0, 0, 1), pol(1, 0, 0);
  SUBCASE("far-field transversality") {
    // the radial component is pure near-field, falling one power of kr
    // faster than the radiation field
    auto radial_fraction = [&](double r) {
      const Vec3 p = r * Vec3(0.3, 0.2, 0.93).normalized();
      const Vec3c E = mie_pec(1.0, p, dir, pol);
      const Vec3 rhat = p.normalized();
      cd radial = 0.0;
      for (int c = 0; c < 3; ++c) radial += E[c] * rhat[c];
      return std::abs(radial) / E.norm();
    };
    const double f100 = radial_fraction(100.0);
    const double f1000 = radial_fraction(1000.0);
    CHECK(f100 < 2.0 / 100.0);
    CHECK(f1000 < 2.0 / 1000.0);
    CHECK(f1000 < 0.2 * f100);
  }
  SUBCASE("mirror symmetry across the polarization plane") {
    const Vec3 p1 = 2.0 * Vec3(0.5, 0.4, 0.768).normalized();
    const Vec3 p2 = 2.0 * Vec3(0.5, -0.4, 0.768).normalized();
    CHECK(mie_pec(1.0, p1, dir, pol).norm() ==
          doctest::Approx(mie_pec(1.0, p2, dir, pol).norm()).epsilon(1e-12));
  }
  SUBCASE("quasistatic limit matches the two-dipole closed form") {
    // the first neglected multipole enters at O(ka) relative at these
    // distances, so the tolerance tracks ka
    for (const double ka : {1e-4, 1e-3}) {
      for (const Vec3& p : {Vec3(0, 0, 2), Vec3(1.3, 0.7, 1.1), Vec3(-0.9, 1.4, -0.8)}) {
        const Vec3c mie = mie_pec(ka, p, dir, pol);
        const Vec3c stat = pec_sphere_quasistatic(1.0, ka, p, dir, pol);
        CHECK((mie - stat).norm() <= ka * stat.norm());
      }
    }
  }
}

TEST_CASE("dielectric Mie") {
  const Vec3 dir(0, 0, 1), pol(1, 0, 0);
  SUBCASE("transparency at m = 1") {
    const Vec3c E = mie_dielectric(1.0, 1.0, Vec3(0, 1.7, 0.4), dir, pol).scattered;
    CHECK(E.norm() < 1e-14);
    const Vec3c Etr = mie_dielectric(1.0, 1.0, Vec3(0.2, 0.1, 0.3), dir, pol).transmitted;
    // transmitted equals the incident plane wave
    const cd phase = std::exp(cd(0, 1) * 1.0 * 0.3);
    CHECK(std::abs(Etr[0] - phase) < 1e-12);
  }
  SUBCASE("boundary conditions hold across the interface") {
    const double x = 1.0, m = 1.25;
    for (const Vec3& u :
         {Vec3(0.2, 0.3, 0.93), Vec3(-0.6, 0.5, 0.4), Vec3(0.9, -0.1, -0.2)}) {
      const Vec3 rhat = u.normalized();
      const auto out = mie_dielectric(x, m, rhat * (1.0 + 1e-9), dir, pol);
      const auto in = mie_dielectric(x, m, rhat * (1.0 - 1e-9), dir, pol);
      Vec3c Einc;
      const cd phase = std::exp(cd(0, 1) * x * dir.dot(rhat));
      for (int c = 0; c < 3; ++c) Einc[c] = pol[c] * phase;
      const Vec3c Eout = out.scattered + Einc;
      const Vec3c Ein = in.transmitted;
      // tangential continuity
      Vec3c diff = Eout - Ein;
      cd dn = 0.0;
      for (int c = 0; c < 3; ++c) dn += diff[c] * rhat[c];
      Vec3c tang = diff;
      for (int c = 0; c < 3; ++c) tang[c] -= dn * rhat[c];
      CHECK(tang.norm() < 1e-6 * Eout.norm());
      // normal displacement continuity: n.(E_out) = m^2 n.(E_in)
      cd n_out = 0.0, n_in = 0.0;
      for (int c = 0; c < 3; ++c) {
        n_out += Eout[c] * rhat[c];
        n_in += Ein[c] * rhat[c];
      }
      CHECK(std::abs(n_out - m * m * n_in) < 1e-6 * std::abs(n_out) + 1e-9);
    }
  }
  SUBCASE("static interior field") {
    const double eps_r = 2.0;
    const auto f = mie_dielectric(1e-3, std::sqrt(eps_r), Vec3(0.2, 0.1, -0.3), dir, pol);
    const Vec3c expect = dielectric_sphere_static(1.0, eps_r, Vec3(0.2, 0.1, -0.3), pol).transmitted;
    CHECK((f.transmitted - expect).norm() < 1e-3 * expect.norm());
  }
  SUBCASE("truncation invariance") {
    SeriesConfig c40{40, 0.0}, c70{70, 0.0};
    const Vec3 p(0.4, 1.2, 0.9);
    const Vec3c a = mie_dielectric(2.0, 1.5, p, dir, pol, c40).scattered;
    const Vec3c b = mie_dielectric(2.0, 1.5, p, dir, pol, c70).scattered;
    CHECK((a - b).norm() <= 1e-12 * a.norm());
  }
}

TEST_CASE("resonator lumped formula") {
  SUBCASE("published geometry") {
    const double A = std::pow(0.162, 2) * M_PI;
    const double V = 4.0 / 3.0 * std::pow(0.92, 3) * M_PI;
    const double L = 0.67;
    const double ka = resonator_ka(1.0, A, V, L);
    // the formula value for these inputs (the often-quoted 0.208 does not
    // follow from them; see the sweep tests for the observed peak)
    CHECK(ka == doctest::Approx(0.194237).epsilon(1e-4));
  }
  SUBCASE("scale invariance") {
    const double ka1 = resonator_ka(1.0, 0.08, 3.2, 0.67);
    const double ka2 = resonator_ka(2.0, 0.08 * 4.0, 3.2 * 8.0, 0.67 * 2.0);
    CHECK(ka1 == doctest::Approx(ka2).epsilon(1e-14));
  }
  SUBCASE("vanishing opening") { CHECK(resonator_ka(1.0, 0.0, 3.2, 0.67) == 0.0); }
}
