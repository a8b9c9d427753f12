#pragma once

#include <stdexcept>
#include <vector>

#include "helmbem/types.hpp"

namespace helmbem {
namespace oracles {

struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Truncation control for the partial-wave sums.
struct SeriesConfig {
  int max_terms = 0;        // 0 = pick from the size parameter
  double tolerance = 1e-13; // stop once |term| < tolerance * |partial sum|
};

/// Spherical Bessel j_0..j_nmax by downward (Miller) recurrence, y by
/// upward recurrence. Derivatives follow z_n' = z_{n-1} - (n+1)/x z_n.
std::vector<double> sph_jn(int nmax, double x);
std::vector<double> sph_yn(int nmax, double x);

/// Scattered potential of a plane wave exp(ikz) hitting a sound-hard
/// sphere of radius a: partial-wave sum with -j_n'(ka)/h_n'(ka)
/// coefficients. theta is measured from the propagation direction.
cd rigid_sphere_scatter(double ka, double r_over_a, double theta,
                        const SeriesConfig& cfg = {});

/// Scattered E field of a plane wave exp(i k d.x) on a perfectly
/// conducting sphere of radius a centred at the origin. `polarization`
/// must be a unit vector orthogonal to `direction`; incident amplitude 1.
Vec3c mie_pec(double ka, const Vec3& point_over_a, const Vec3& direction,
              const Vec3& polarization, const SeriesConfig& cfg = {});

struct DielectricField {
  Vec3c scattered;   // valid outside the sphere
  Vec3c transmitted; // valid inside
};

/// Dielectric sphere with equal permeabilities; m = k_in/k_out,
/// eps_in/eps_out = m^2.
DielectricField mie_dielectric(double k_out_a, double m,
                               const Vec3& point_over_a, const Vec3& direction,
                               const Vec3& polarization,
                               const SeriesConfig& cfg = {});

/// Long-wavelength closed form for the conducting sphere: electric dipole
/// p = a^3 pol plus the leading magnetic-dipole term
/// m = -(a^3/2)(dir x pol). Valid for |k| r << 1.
Vec3c pec_sphere_quasistatic(double a, double k, const Vec3& point,
                             const Vec3& direction, const Vec3& polarization);

/// Electrostatic dielectric sphere: uniform interior field
/// 3/(eps_r + 2) * pol and the exterior dipole p = a^3 (eps_r-1)/(eps_r+2).
DielectricField dielectric_sphere_static(double a, double eps_r, const Vec3& point,
                                         const Vec3& polarization);

/// Lumped Helmholtz-resonator estimate ka = a sqrt(A / (V L)).
double resonator_ka(double a, double opening_area, double cavity_volume,
                    double neck_length);

} // namespace oracles
} // namespace helmbem
