#include "helmbem/oracles.hpp"

#include <cmath>

namespace helmbem {
namespace oracles {

namespace {

int pick_terms(double size_parameter, const SeriesConfig& cfg) {
  if (cfg.max_terms > 0) return cfg.max_terms;
  return std::max(40, static_cast<int>(std::ceil(size_parameter)) + 30);
}

} // namespace

std::vector<double> sph_jn(int nmax, double x) {
  std::vector<double> j(nmax + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  const double j0 = std::sin(x) / x;
  if (nmax == 0) {
    j[0] = j0;
    return j;
  }
  // downward recurrence from well above max(nmax, x), normalised by j0
  const int start = nmax + 16 + static_cast<int>(std::ceil(std::abs(x)));
  double jp1 = 0.0, jj = 1e-30;
  for (int n = start; n >= 1; --n) {
    const double jm1 = (2.0 * n + 1.0) / x * jj - jp1;
    jp1 = jj;
    jj = jm1;
    if (n - 1 <= nmax) j[n - 1] = jj;
    if (std::abs(jj) > 1e280) { // rescale to dodge overflow
      jp1 /= 1e280;
      jj /= 1e280;
      for (int m = n - 1; m <= nmax; ++m)
        if (m >= 0) j[m] /= 1e280;
    }
  }
  // normalise against whichever closed form is away from its zero
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  const double scale = (std::abs(j[0]) >= std::abs(j[1]) || nmax < 1)
                           ? j0 / j[0]
                           : j1 / j[1];
  for (auto& v : j) v *= scale;
  return j;
}

std::vector<double> sph_yn(int nmax, double x) {
  std::vector<double> y(nmax + 1);
  y[0] = -std::cos(x) / x;
  if (nmax >= 1) y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int n = 1; n < nmax; ++n)
    y[n + 1] = (2.0 * n + 1.0) / x * y[n] - y[n - 1];
  return y;
}

namespace {

struct Radial {
  std::vector<cd> h;       // spherical Hankel h_n^(1)
  std::vector<cd> dh;      // derivative
  std::vector<double> j;
  std::vector<double> dj;
};

Radial radial_functions(int nmax, double x, bool need_hankel) {
  Radial r;
  r.j = sph_jn(nmax + 1, x);
  const auto y = need_hankel ? sph_yn(nmax + 1, x) : std::vector<double>(nmax + 2, 0.0);
  r.h.resize(nmax + 1);
  r.dh.resize(nmax + 1);
  r.dj.resize(nmax + 1);
  for (int n = 0; n <= nmax; ++n) {
    r.h[n] = cd(r.j[n], y[n]);
    const cd hm1 = (n == 0) ? cd(std::cos(x) / x, std::sin(x) / x) // h_{-1} = (cos x + i sin x)/x
                            : cd(r.j[n - 1], y[n - 1]);
    const double jm1 = (n == 0) ? std::cos(x) / x : r.j[n - 1];
    r.dh[n] = hm1 - (n + 1.0) / x * r.h[n];
    r.dj[n] = jm1 - (n + 1.0) / x * r.j[n];
  }
  return r;
}

} // namespace

cd rigid_sphere_scatter(double ka, double r_over_a, double theta,
                        const SeriesConfig& cfg) {
  if (!(ka > 0.0) || !(r_over_a >= 1.0))
    throw std::invalid_argument("rigid_sphere_scatter: need ka > 0 and r >= a");
  const int nmax = pick_terms(ka, cfg);
  const Radial at_a = radial_functions(nmax, ka, true);
  const Radial at_r = radial_functions(nmax, ka * r_over_a, true);
  const double mu = std::cos(theta);

  cd sum = 0.0;
  double p_nm2 = 1.0, p_nm1 = mu; // P_0, P_1
  cd i_pow = 1.0;                 // i^n
  bool converged = false;
  for (int n = 0; n <= nmax; ++n) {
    const double pn = (n == 0) ? 1.0 : (n == 1) ? mu
                      : ((2.0 * n - 1.0) * mu * p_nm1 - (n - 1.0) * p_nm2) / n;
    if (n >= 2) {
      p_nm2 = p_nm1;
      p_nm1 = pn;
    }
    const cd coeff = -(2.0 * n + 1.0) * i_pow * (at_a.dj[n] / at_a.dh[n]);
    const cd term = coeff * at_r.h[n] * pn;
    sum += term;
    i_pow *= iu;
    if (n > ka + 4 && std::abs(term) < cfg.tolerance * std::abs(sum)) {
      converged = true;
      break;
    }
  }
  if (!converged && cfg.max_terms == 0)
    throw NonConvergenceError("rigid_sphere_scatter: series did not converge");
  return sum;
}

namespace {

// Sum E = sum_n E_n (i alpha_n N_e1n(z) - beta_n M_o1n(z)) for radial
// function z = h (kind=3) or j (kind=1), at (rho, theta, phi), and map the
// spherical components back to the frame (ex, ey, ez) = (pol, dir x pol, dir).
Vec3c vector_partial_waves(double rho, double mu, double phi,
                           const std::vector<cd>& alpha, const std::vector<cd>& beta,
                           bool outgoing, int nmax, int min_n, double tol,
                           bool* converged) {
  const Radial rad = radial_functions(nmax, rho, outgoing);
  const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));

  cd Er = 0.0, Eth = 0.0, Eph = 0.0;
  double pi_nm1 = 0.0, pi_n = 1.0; // pi_0, pi_1
  cd En = 1.5 * iu;                // E_n = i^n (2n+1)/(n(n+1)) at n=1
  *converged = false;
  for (int n = 1; n <= nmax; ++n) {
    const double tau_n = n * mu * pi_n - (n + 1.0) * pi_nm1;
    const cd zn = outgoing ? rad.h[n] : cd(rad.j[n], 0.0);
    const cd dzn = outgoing ? rad.dh[n] : cd(rad.dj[n], 0.0);
    const cd ric_dz = zn / rho + dzn; // [rho z_n]' / rho

    const cd a = alpha[n], b = beta[n];
    const cd dEr = iu * a * En * (n * (n + 1.0)) * st * pi_n * zn / rho;
    const cd dEth = En * (iu * a * tau_n * ric_dz - b * pi_n * zn);
    const cd dEph = -En * (iu * a * pi_n * ric_dz - b * tau_n * zn);
    Er += dEr * std::cos(phi);
    Eth += dEth * std::cos(phi);
    Eph += dEph * std::sin(phi);

    const double mag = std::abs(dEr) + std::abs(dEth) + std::abs(dEph);
    const double tot = std::abs(Er) + std::abs(Eth) + std::abs(Eph);
    if (n > min_n && mag < tol * std::max(tot, 1e-300)) {
      *converged = true;
      break;
    }

    const double pi_np1 = ((2.0 * n + 1.0) * mu * pi_n - (n + 1.0) * pi_nm1) / n;
    pi_nm1 = pi_n;
    pi_n = pi_np1;
    En *= iu * ((2.0 * n + 3.0) * n / ((2.0 * n + 1.0) * (n + 2.0)));
  }

  // spherical unit vectors in the (e1, e2, e3) = (pol, dir x pol, dir) frame
  const double ct = mu;
  const Vec3 rhat(st * std::cos(phi), st * std::sin(phi), ct);
  const Vec3 that(ct * std::cos(phi), ct * std::sin(phi), -st);
  const Vec3 phat(-std::sin(phi), std::cos(phi), 0.0);
  Vec3c out;
  for (int c = 0; c < 3; ++c) out[c] = Er * rhat[c] + Eth * that[c] + Eph * phat[c];
  return out;
}

void check_polarization(const Vec3& direction, const Vec3& polarization) {
  if (std::abs(direction.norm() - 1.0) > 1e-10 ||
      std::abs(polarization.norm() - 1.0) > 1e-10 ||
      std::abs(direction.dot(polarization)) > 1e-10)
    throw std::invalid_argument("mie: direction/polarization must be orthonormal");
}

// local coordinates of a point in the (pol, dir x pol, dir) frame
void local_angles(const Vec3& p, const Vec3& direction, const Vec3& polarization,
                  double& r, double& mu, double& phi) {
  const Vec3 e3 = direction;
  const Vec3 e1 = polarization;
  const Vec3 e2 = e3.cross(e1);
  r = p.norm();
  if (r == 0.0) {
    mu = 1.0;
    phi = 0.0;
    return;
  }
  const double z = p.dot(e3), x = p.dot(e1), y = p.dot(e2);
  mu = z / r;
  phi = std::atan2(y, x);
}

// Riccati-Bessel psi = x j, xi = x h and derivatives at x.
struct Riccati {
  std::vector<cd> psi, dpsi, xi, dxi;
};

Riccati riccati(int nmax, cd x_c) {
  // only real arguments occur here; complex kept for the signature's sake
  const double x = x_c.real();
  Riccati rc;
  const auto j = sph_jn(nmax + 1, x);
  const auto y = sph_yn(nmax + 1, x);
  rc.psi.resize(nmax + 1);
  rc.dpsi.resize(nmax + 1);
  rc.xi.resize(nmax + 1);
  rc.dxi.resize(nmax + 1);
  for (int n = 0; n <= nmax; ++n) {
    const cd h = cd(j[n], y[n]);
    rc.psi[n] = x * j[n];
    rc.xi[n] = x * h;
    const double jm1 = (n == 0) ? std::cos(x) / x : j[n - 1];
    const cd hm1 = (n == 0) ? cd(std::cos(x) / x, std::sin(x) / x) : cd(j[n - 1], y[n - 1]);
    rc.dpsi[n] = x * jm1 - n * j[n];        // [x j_n]' = x j_{n-1} - n j_n
    rc.dxi[n] = x * hm1 - cd(n, 0.0) * h;
  }
  return rc;
}

} // namespace

Vec3c mie_pec(double ka, const Vec3& point_over_a, const Vec3& direction,
              const Vec3& polarization, const SeriesConfig& cfg) {
  check_polarization(direction, polarization);
  double r, mu, phi;
  local_angles(point_over_a, direction, polarization, r, mu, phi);
  if (r < 1.0 - 1e-12) throw std::invalid_argument("mie_pec: point inside the sphere");
  const double rho = ka * r;
  const int nmax = pick_terms(ka, cfg);
  const int min_n = static_cast<int>(std::ceil(ka)) + 4;

  const Riccati rc = riccati(nmax, ka);
  std::vector<cd> a(nmax + 1), b(nmax + 1);
  for (int n = 1; n <= nmax; ++n) {
    a[n] = rc.dpsi[n] / rc.dxi[n];
    b[n] = rc.psi[n] / rc.xi[n];
  }
  bool conv = false;
  const Vec3c local =
      vector_partial_waves(rho, mu, phi, a, b, true, nmax, min_n, cfg.tolerance, &conv);
  if (!conv && cfg.max_terms == 0)
    throw NonConvergenceError("mie_pec: series did not converge");
  const Vec3 e1 = polarization, e3 = direction, e2 = e3.cross(e1);
  Vec3c out;
  for (int c = 0; c < 3; ++c)
    out[c] = local[0] * e1[c] + local[1] * e2[c] + local[2] * e3[c];
  return out;
}

DielectricField mie_dielectric(double k_out_a, double m, const Vec3& point_over_a,
                               const Vec3& direction, const Vec3& polarization,
                               const SeriesConfig& cfg) {
  check_polarization(direction, polarization);
  if (!(m > 0.0)) throw std::invalid_argument("mie_dielectric: m must be positive");
  double r, mu, phi;
  local_angles(point_over_a, direction, polarization, r, mu, phi);
  const double x = k_out_a, y = m * x;
  const int nmax = pick_terms(std::max(x, y), cfg);
  const int min_n = static_cast<int>(std::ceil(std::max(x, y))) + 4;

  const Riccati ox = riccati(nmax, x);
  const Riccati oy = riccati(nmax, y);
  std::vector<cd> a(nmax + 1), b(nmax + 1), c(nmax + 1), d(nmax + 1);
  for (int n = 1; n <= nmax; ++n) {
    const cd psy = oy.psi[n], dpsy = oy.dpsi[n];
    const cd psx = ox.psi[n], dpsx = ox.dpsi[n];
    const cd xix = ox.xi[n], dxix = ox.dxi[n];
    const cd wronsk = psx * dxix - dpsx * xix; // = i
    a[n] = (m * psy * dpsx - psx * dpsy) / (m * psy * dxix - xix * dpsy);
    b[n] = (psy * dpsx - m * psx * dpsy) / (psy * dxix - m * xix * dpsy);
    d[n] = m * wronsk / (m * psy * dxix - xix * dpsy);
    c[n] = m * wronsk / (psy * dxix - m * xix * dpsy);
  }

  DielectricField out;
  const Vec3 e1 = polarization, e3 = direction, e2 = e3.cross(e1);
  bool conv = false;
  if (r >= 1.0 - 1e-12) {
    const Vec3c local =
        vector_partial_waves(x * r, mu, phi, a, b, true, nmax, min_n, cfg.tolerance, &conv);
    for (int cc = 0; cc < 3; ++cc)
      out.scattered[cc] = local[0] * e1[cc] + local[1] * e2[cc] + local[2] * e3[cc];
  }
  if (r <= 1.0 + 1e-12) {
    // interior: E_1 = sum E_n (c_n M^(1) - i d_n N^(1))
    std::vector<cd> alpha(nmax + 1), beta(nmax + 1);
    for (int n = 1; n <= nmax; ++n) {
      alpha[n] = -d[n]; // i*alpha pairs with N; need -i d_n => alpha = -d
      beta[n] = -c[n];  // -beta pairs with M; need +c_n  => beta = -c
    }
    const double rho_in = std::max(y * r, 1e-9 * y);
    const Vec3c local = vector_partial_waves(rho_in, mu, phi, alpha, beta, false, nmax,
                                             min_n, cfg.tolerance, &conv);
    for (int cc = 0; cc < 3; ++cc)
      out.transmitted[cc] = local[0] * e1[cc] + local[1] * e2[cc] + local[2] * e3[cc];
  }
  if (!conv && cfg.max_terms == 0)
    throw NonConvergenceError("mie_dielectric: series did not converge");
  return out;
}

Vec3c pec_sphere_quasistatic(double a, double k, const Vec3& point,
                             const Vec3& direction, const Vec3& polarization) {
  check_polarization(direction, polarization);
  const double r = point.norm();
  const Vec3 rhat = point / r;
  const Vec3 p = a * a * a * polarization;
  const Vec3 mdip = -0.5 * a * a * a * direction.cross(polarization);

  // full retarded point-dipole fields; the sphere corrections beyond the
  // two dipoles are O((ka)^2) relative
  const cd eikr = std::exp(iu * k * r);
  const Vec3 p_trans = p - rhat * p.dot(rhat);
  const Vec3 p_near = 3.0 * rhat * p.dot(rhat) - p;
  const Vec3 m_cross = rhat.cross(mdip);
  Vec3c out;
  for (int c = 0; c < 3; ++c) {
    const cd electric = eikr * (k * k * p_trans[c] / r +
                                p_near[c] * (1.0 - iu * k * r) / (r * r * r));
    const cd magnetic = -eikr * k * k * m_cross[c] *
                        (1.0 + iu / (k * r)) / r;
    out[c] = electric + magnetic;
  }
  return out;
}

DielectricField dielectric_sphere_static(double a, double eps_r, const Vec3& point,
                                         const Vec3& polarization) {
  DielectricField out;
  const double r = point.norm();
  const double factor = (eps_r - 1.0) / (eps_r + 2.0);
  if (r >= a) {
    const Vec3 rhat = point / r;
    const Vec3 p = factor * a * a * a * polarization;
    const Vec3 e = (3.0 * rhat * p.dot(rhat) - p) / (r * r * r);
    out.scattered = e.cast<cd>();
  }
  if (r <= a) out.transmitted = (3.0 / (eps_r + 2.0)) * polarization.cast<cd>();
  return out;
}

double resonator_ka(double a, double opening_area, double cavity_volume,
                    double neck_length) {
  if (!(a > 0.0) || !(opening_area >= 0.0) || !(cavity_volume > 0.0) || !(neck_length > 0.0))
    throw std::invalid_argument("resonator_ka: arguments must be positive");
  return a * std::sqrt(opening_area / (cavity_volume * neck_length));
}

} // namespace oracles
} // namespace helmbem
