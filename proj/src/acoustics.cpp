#include "helmbem/acoustics.hpp"

#include <cmath>

#include "helmbem/dense.hpp"
#include "helmbem/kernels.hpp"
#include "helmbem/parallel.hpp"
#include "helmbem/quadrature.hpp"

namespace helmbem {
namespace acoustics {

void incident_scalar(const PlaneWave& wave, const QuadMesh& mesh,
                     const std::vector<NodeFrame>& frames,
                     SurfaceField& phi_inc, SurfaceField& dphi_inc_dn) {
  if (std::abs(wave.direction.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("incident_scalar: direction must be a unit vector");
  const int n = mesh.num_nodes();
  phi_inc.resize(n);
  dphi_inc_dn.resize(n);
  for (int i = 0; i < n; ++i) {
    const cd phase = std::exp(iu * wave.k * wave.direction.dot(mesh.nodes[i]));
    const Vec3 nc = -frames[i].n; // collocation normal (out of the fluid)
    phi_inc[i] = wave.amplitude * phase;
    dphi_inc_dn[i] = iu * wave.k * wave.direction.dot(nc) * phi_inc[i];
  }
}

namespace {

ScatterSolution solve_with_rhs(const QuadMesh& mesh, const std::vector<NodeFrame>& frames,
                               cd k, const SurfaceField& dphi_dn,
                               const SolveOptions& options) {
  ScatterSolution sol;
  sol.k = k;
  sol.formulation = options.formulation;
  sol.dphi_dn = dphi_dn;

  if (options.formulation == Formulation::Standard) {
    BemMatrices mats = assemble(mesh, frames, k, /*exterior=*/true, options.quadrature);
    const VecXc rhs = mats.G * dphi_dn;
    DenseSolveResult res = solve_dense_inplace(mats.H, rhs);
    sol.phi = res.X.col(0);
    sol.solve_residual = res.residual;
    sol.condition_estimate = res.condition_estimate;
  } else {
    const double beta = options.beta_override > 0.0
                            ? options.beta_override
                            : default_beta(mesh.characteristic_length, k);
    BurtonMillerMatrices mats =
        assemble_burton_miller(mesh, frames, k, beta, /*exterior=*/true, options.quadrature);
    const VecXc rhs = mats.R * dphi_dn;
    DenseSolveResult res = solve_dense_inplace(mats.L, rhs);
    sol.phi = res.X.col(0);
    sol.solve_residual = res.residual;
    sol.condition_estimate = res.condition_estimate;
  }
  return sol;
}

} // namespace

ScatterSolution solve_hard(const QuadMesh& mesh, const std::vector<NodeFrame>& frames,
                           const PlaneWave& wave, const SolveOptions& options) {
  SurfaceField phi_inc, dphi_inc;
  incident_scalar(wave, mesh, frames, phi_inc, dphi_inc);
  return solve_with_rhs(mesh, frames, wave.k, -dphi_inc, options);
}

ScatterSolution solve_neumann(const QuadMesh& mesh, const std::vector<NodeFrame>& frames,
                              cd k, const SurfaceField& dphi_dn,
                              const SolveOptions& options) {
  if (dphi_dn.size() != mesh.num_nodes())
    throw std::invalid_argument("solve_neumann: boundary data size mismatch");
  return solve_with_rhs(mesh, frames, k, dphi_dn, options);
}

namespace {

struct RefTri {
  double xi[3];
  double eta[3];
};

// Integrand contribution of one reference-space (sub-)triangle.
void integrate_subtri(const QuadMesh& mesh, int elem, const SurfaceField& phi,
                      const SurfaceField& q, cd k, const Vec3& x0,
                      const TriangleQuadrature& rule, const RefTri& tri,
                      double area_fraction, cd& acc) {
  const auto& conn = mesh.elements[elem];
  for (const auto& p : rule.points) {
    const double xi = tri.xi[0] * p.bary[0] + tri.xi[1] * p.bary[1] + tri.xi[2] * p.bary[2];
    const double eta = tri.eta[0] * p.bary[0] + tri.eta[1] * p.bary[1] + tri.eta[2] * p.bary[2];
    const ShapeEval se = shape_eval(mesh, elem, xi, eta);
    double N[6];
    shape_values(xi, eta, N);
    cd phi_x = 0.0, q_x = 0.0;
    for (int a = 0; a < 6; ++a) {
      phi_x += N[a] * phi[conn[a]];
      q_x += N[a] * q[conn[a]];
    }
    const Vec3 d = se.position - x0;
    const double r = d.norm();
    const cd eikr = std::exp(iu * k * r);
    const cd gk = eikr / r;
    const double dn = d.dot(-se.normal); // collocation normal
    const cd dgk_dn = (iu * k * r - 1.0) * eikr * dn / (r * r * r);
    acc += (q_x * gk - phi_x * dgk_dn) * se.jacobian * p.weight * area_fraction;
  }
}

void integrate_adaptive(const QuadMesh& mesh, int elem, const SurfaceField& phi,
                        const SurfaceField& q, cd k, const Vec3& x0,
                        const TriangleQuadrature& rule, const RefTri& tri,
                        double area_fraction, int depth, int max_depth, cd& acc) {
  // corners of this reference patch in space
  Vec3 c[3];
  for (int v = 0; v < 3; ++v)
    c[v] = shape_eval(mesh, elem, tri.xi[v], tri.eta[v]).position;
  double diam = 0.0, dist = std::numeric_limits<double>::infinity();
  for (int v = 0; v < 3; ++v) {
    diam = std::max(diam, (c[v] - c[(v + 1) % 3]).norm());
    dist = std::min(dist, (c[v] - x0).norm());
  }
  const Vec3 centroid = (c[0] + c[1] + c[2]) / 3.0;
  dist = std::min(dist, (centroid - x0).norm());

  if (depth < max_depth && dist < 1.5 * diam) {
    const double mx01 = 0.5 * (tri.xi[0] + tri.xi[1]), me01 = 0.5 * (tri.eta[0] + tri.eta[1]);
    const double mx12 = 0.5 * (tri.xi[1] + tri.xi[2]), me12 = 0.5 * (tri.eta[1] + tri.eta[2]);
    const double mx20 = 0.5 * (tri.xi[2] + tri.xi[0]), me20 = 0.5 * (tri.eta[2] + tri.eta[0]);
    const RefTri sub[4] = {
        {{tri.xi[0], mx01, mx20}, {tri.eta[0], me01, me20}},
        {{mx01, tri.xi[1], mx12}, {me01, tri.eta[1], me12}},
        {{mx20, mx12, tri.xi[2]}, {me20, me12, tri.eta[2]}},
        {{mx01, mx12, mx20}, {me01, me12, me20}},
    };
    for (const auto& s : sub)
      integrate_adaptive(mesh, elem, phi, q, k, x0, rule, s, 0.25 * area_fraction,
                         depth + 1, max_depth, acc);
    return;
  }
  integrate_subtri(mesh, elem, phi, q, k, x0, rule, tri, area_fraction, acc);
}

} // namespace

std::vector<cd> representation_integral(const QuadMesh& mesh, const SurfaceField& phi,
                                        const SurfaceField& q, cd k, bool interior,
                                        const std::vector<Vec3>& points,
                                        const FieldEvalConfig& config) {
  const TriangleQuadrature rule = gauss_rule(config.far_degree);
  const double sign = interior ? -1.0 : 1.0;
  const double a = mesh.characteristic_length;

  // element diameters once
  std::vector<double> diam(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& conn = mesh.elements[e];
    double d2 = 0.0;
    for (int u = 0; u < 3; ++u)
      for (int v = u + 1; v < 3; ++v)
        d2 = std::max(d2, (mesh.nodes[conn[u]] - mesh.nodes[conn[v]]).squaredNorm());
    diam[e] = std::sqrt(d2);
  }

  std::vector<cd> out(points.size());
  std::vector<char> on_surface(points.size(), 0);
  parallel_for(static_cast<int>(points.size()), [&](int ip) {
    const Vec3 x0 = points[ip];
    cd acc = 0.0;
    const RefTri whole = {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    for (int e = 0; e < mesh.num_elements(); ++e) {
      double d2 = std::numeric_limits<double>::infinity();
      for (int v = 0; v < 6; ++v)
        d2 = std::min(d2, (mesh.nodes[mesh.elements[e][v]] - x0).squaredNorm());
      const double dist = std::sqrt(d2);
      if (dist < config.on_surface_tol * a) {
        on_surface[ip] = 1;
        return;
      }
      if (dist < 2.0 * diam[e]) {
        integrate_adaptive(mesh, e, phi, q, k, x0, rule, whole, 1.0, 0,
                           config.max_depth, acc);
      } else {
        integrate_subtri(mesh, e, phi, q, k, x0, rule, whole, 1.0, acc);
      }
    }
    out[ip] = sign * acc / (4.0 * pi);
  });
  for (std::size_t ip = 0; ip < points.size(); ++ip)
    if (on_surface[ip])
      throw std::invalid_argument("representation_integral: point " + std::to_string(ip) +
                                  " lies on the surface");
  return out;
}

std::vector<cd> evaluate_field(const QuadMesh& mesh, const ScatterSolution& solution,
                               const std::vector<Vec3>& points,
                               const FieldEvalConfig& config) {
  return representation_integral(mesh, solution.phi, solution.dphi_dn, solution.k,
                                 /*interior=*/false, points, config);
}

std::vector<SweepRow> sweep(const QuadMesh& mesh, const std::vector<NodeFrame>& frames,
                            const std::vector<double>& ka_values,
                            const Vec3& direction, const std::vector<Vec3>& probes,
                            const SolveOptions& options) {
  if (ka_values.empty()) throw std::invalid_argument("sweep: empty ka list");
  if (probes.empty()) throw std::invalid_argument("sweep: no probe points");
  const double a = mesh.characteristic_length;

  std::vector<SweepRow> rows;
  rows.reserve(ka_values.size());
  for (const double ka : ka_values) {
    PlaneWave wave;
    wave.k = ka / a;
    wave.direction = direction;
    const ScatterSolution sol = solve_hard(mesh, frames, wave, options);
    const std::vector<cd> sc = evaluate_field(mesh, sol, probes);

    SweepRow row;
    row.ka = ka;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const cd inc = std::exp(iu * wave.k * direction.dot(probes[p]));
      const double tot = std::abs(inc + sc[p]);
      if (tot > row.max_abs_total) {
        row.max_abs_total = tot;
        row.argmax_probe = static_cast<int>(p);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

} // namespace acoustics
} // namespace helmbem
