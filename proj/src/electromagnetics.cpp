#include "helmbem/electromagnetics.hpp"

#include <cmath>

#include "helmbem/dense.hpp"

namespace helmbem {
namespace em {

EmIncident incident_em(double k, const Vec3& direction, const Vec3& polarization,
                       const QuadMesh& mesh, const std::vector<NodeFrame>& frames) {
  if (std::abs(direction.norm() - 1.0) > 1e-10 ||
      std::abs(polarization.norm() - 1.0) > 1e-10 ||
      std::abs(direction.dot(polarization)) > 1e-10)
    throw std::invalid_argument("incident_em: direction/polarization must be orthonormal");

  const std::vector<NodeFrame> cf = collocation_frames(frames);
  const int n = mesh.num_nodes();
  EmIncident inc;
  inc.k = k;
  inc.direction = direction;
  inc.polarization = polarization;
  inc.E.resize(n);
  inc.dE_dn.resize(n);
  inc.E_n.resize(n);
  inc.E_t1.resize(n);
  inc.E_t2.resize(n);
  inc.ndE_dn.resize(n);
  inc.t1dE_dn.resize(n);
  inc.t2dE_dn.resize(n);

  for (int i = 0; i < n; ++i) {
    const cd phase = std::exp(iu * k * direction.dot(mesh.nodes[i]));
    const cd dphase = iu * k * direction.dot(cf[i].n) * phase;
    for (int c = 0; c < 3; ++c) {
      inc.E[i][c] = polarization[c] * phase;
      inc.dE_dn[i][c] = polarization[c] * dphase;
    }
    auto proj = [&](const Vec3& v, const std::vector<Vec3c>& f) {
      return v[0] * f[i][0] + v[1] * f[i][1] + v[2] * f[i][2];
    };
    inc.E_n[i] = proj(cf[i].n, inc.E);
    inc.E_t1[i] = proj(cf[i].t1, inc.E);
    inc.E_t2[i] = proj(cf[i].t2, inc.E);
    inc.ndE_dn[i] = proj(cf[i].n, inc.dE_dn);
    inc.t1dE_dn[i] = proj(cf[i].t1, inc.dE_dn);
    inc.t2dE_dn[i] = proj(cf[i].t2, inc.dE_dn);
  }
  return inc;
}

namespace {

struct FrameArrays {
  VecX n[3], t1[3], t2[3]; // Cartesian components per node
  VecX kappa;
};

FrameArrays frame_arrays(const std::vector<NodeFrame>& cf) {
  const int n = static_cast<int>(cf.size());
  FrameArrays fa;
  for (int c = 0; c < 3; ++c) {
    fa.n[c].resize(n);
    fa.t1[c].resize(n);
    fa.t2[c].resize(n);
  }
  fa.kappa.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      fa.n[c][i] = cf[i].n[c];
      fa.t1[c][i] = cf[i].t1[c];
      fa.t2[c][i] = cf[i].t2[c];
    }
    fa.kappa[i] = cf[i].kappa;
  }
  return fa;
}

} // namespace

PecSolution solve_pec(const QuadMesh& mesh, const std::vector<NodeFrame>& frames,
                      const EmIncident& incident, const EmSolveOptions& options) {
  const int n = mesh.num_nodes();
  const std::vector<NodeFrame> cf = collocation_frames(frames);
  const FrameArrays fa = frame_arrays(cf);

  BemMatrices mats = assemble(mesh, frames, incident.k, /*exterior=*/true,
                              options.quadrature);

  MatXc A(3 * n, 3 * n);
  VecXc rhs(3 * n);
  for (int c = 0; c < 3; ++c) {
    A.block(c * n, 0, n, n) = mats.H * fa.n[c].asDiagonal() -
                              mats.G * (fa.kappa.cwiseProduct(fa.n[c])).asDiagonal();
    A.block(c * n, n, n, n) = -mats.G * fa.t1[c].asDiagonal();
    A.block(c * n, 2 * n, n, n) = -mats.G * fa.t2[c].asDiagonal();

    const VecXc tang = fa.t1[c].cwiseProduct(incident.E_t1.array().matrix()) +
                       fa.t2[c].cwiseProduct(incident.E_t2);
    const VecXc norm = fa.n[c].cwiseProduct(
        (fa.kappa.cast<cd>().cwiseProduct(incident.E_n) - incident.ndE_dn).eval());
    rhs.segment(c * n, n) = mats.H * tang + mats.G * norm;
  }

  DenseSolveResult res = solve_dense_inplace(A, rhs);

  PecSolution sol;
  sol.k = incident.k;
  sol.solve_residual = res.residual;
  sol.condition_estimate = res.condition_estimate;
  sol.E_n_sc = res.X.col(0).segment(0, n);
  sol.t1_dE_dn = res.X.col(0).segment(n, n);
  sol.t2_dE_dn = res.X.col(0).segment(2 * n, n);

  sol.E_sc.resize(n);
  sol.dE_dn_sc.resize(n);
  for (int i = 0; i < n; ++i) {
    const cd ndE = cf[i].kappa * (sol.E_n_sc[i] + incident.E_n[i]) - incident.ndE_dn[i];
    for (int c = 0; c < 3; ++c) {
      sol.E_sc[i][c] = cf[i].n[c] * sol.E_n_sc[i] - cf[i].t1[c] * incident.E_t1[i] -
                       cf[i].t2[c] * incident.E_t2[i];
      sol.dE_dn_sc[i][c] = cf[i].n[c] * ndE + cf[i].t1[c] * sol.t1_dE_dn[i] +
                           cf[i].t2[c] * sol.t2_dE_dn[i];
    }
  }
  return sol;
}

DielectricSolution solve_dielectric(const QuadMesh& mesh,
                                    const std::vector<NodeFrame>& frames,
                                    const EmIncident& incident, double eps_ratio,
                                    double k_in, const EmSolveOptions& options) {
  if (!(eps_ratio > 0.0))
    throw std::invalid_argument("solve_dielectric: eps_ratio must be positive");
  const int n = mesh.num_nodes();
  const std::vector<NodeFrame> cf = collocation_frames(frames);
  const FrameArrays fa = frame_arrays(cf);
  const double eps_oi = 1.0 / eps_ratio; // eps_out / eps_in
  const double eps_m1 = eps_oi - 1.0;

  BemMatrices outer = assemble(mesh, frames, incident.k, /*exterior=*/true,
                               options.quadrature);
  BemMatrices inner = assemble(mesh, frames, k_in, /*exterior=*/false,
                               options.quadrature);
  const TangentialOps ops = tangential_ops(mesh, cf);
  const Eigen::SparseMatrix<double> D1 = ops.D_t1;
  const Eigen::SparseMatrix<double> D2 = ops.D_t2;

  MatXc A(6 * n, 6 * n);
  VecXc rhs = VecXc::Zero(6 * n);
  for (int c = 0; c < 3; ++c) {
    // exterior rows: H E_alpha_sc = G dE_alpha_sc/dn in projected unknowns
    A.block(c * n, 0, n, n) = outer.H * fa.n[c].asDiagonal();
    A.block(c * n, n, n, n) = outer.H * fa.t1[c].asDiagonal();
    A.block(c * n, 2 * n, n, n) = outer.H * fa.t2[c].asDiagonal();
    A.block(c * n, 3 * n, n, n) = -outer.G * fa.n[c].asDiagonal();
    A.block(c * n, 4 * n, n, n) = -outer.G * fa.t1[c].asDiagonal();
    A.block(c * n, 5 * n, n, n) = -outer.G * fa.t2[c].asDiagonal();

    // interior rows act on the transmitted field expressed through the
    // scattered unknowns and the interface conditions
    MatXc Hbar = eps_oi * (inner.H * fa.n[c].asDiagonal());
    if (eps_m1 != 0.0) {
      Eigen::SparseMatrix<double> tang =
          Eigen::SparseMatrix<double>(fa.t1[c].asDiagonal()) * D1 +
          Eigen::SparseMatrix<double>(fa.t2[c].asDiagonal()) * D2;
      MatXc kappa_term = inner.G * (fa.kappa.cwiseProduct(fa.n[c])).asDiagonal();
      kappa_term += inner.G * MatXc(tang.cast<cd>());
      Hbar -= eps_m1 * kappa_term;
    }
    const int r = (3 + c) * n;
    A.block(r, 0, n, n) = Hbar;
    A.block(r, n, n, n) = inner.H * fa.t1[c].asDiagonal();
    A.block(r, 2 * n, n, n) = inner.H * fa.t2[c].asDiagonal();
    A.block(r, 3 * n, n, n) = -inner.G * fa.n[c].asDiagonal();
    A.block(r, 4 * n, n, n) = -inner.G * fa.t1[c].asDiagonal();
    A.block(r, 5 * n, n, n) = -inner.G * fa.t2[c].asDiagonal();

    VecXc dEc(n);
    for (int i = 0; i < n; ++i) dEc[i] = incident.dE_dn[i][c];
    const VecXc tang_inc = fa.t1[c].cwiseProduct(incident.E_t1) +
                           fa.t2[c].cwiseProduct(incident.E_t2);
    rhs.segment(r, n) = -Hbar * incident.E_n - inner.H * tang_inc + inner.G * dEc;
  }

  DenseSolveResult res = solve_dense_inplace(A, rhs);

  DielectricSolution sol;
  sol.k_out = incident.k;
  sol.k_in = k_in;
  sol.eps_ratio = eps_ratio;
  sol.solve_residual = res.residual;
  sol.condition_estimate = res.condition_estimate;
  sol.E_n_sc = res.X.col(0).segment(0, n);
  sol.E_t1_sc = res.X.col(0).segment(n, n);
  sol.E_t2_sc = res.X.col(0).segment(2 * n, n);
  sol.n_dE_dn = res.X.col(0).segment(3 * n, n);
  sol.t1_dE_dn = res.X.col(0).segment(4 * n, n);
  sol.t2_dE_dn = res.X.col(0).segment(5 * n, n);

  // surface gradients of E_n^(sc+inc) for the transmitted normal derivative
  const VecXc En_tot = sol.E_n_sc + incident.E_n;
  const VecXc dEn_dt1 = D1.cast<cd>() * En_tot;
  const VecXc dEn_dt2 = D2.cast<cd>() * En_tot;

  sol.E_sc.resize(n);
  sol.dE_dn_sc.resize(n);
  sol.E_tr.resize(n);
  sol.dE_dn_tr.resize(n);
  for (int i = 0; i < n; ++i) {
    const cd Et1_tot = sol.E_t1_sc[i] + incident.E_t1[i];
    const cd Et2_tot = sol.E_t2_sc[i] + incident.E_t2[i];
    const cd ndE_tr = sol.n_dE_dn[i] + incident.ndE_dn[i] + cf[i].kappa * eps_m1 * En_tot[i];
    const cd t1dE_tr = sol.t1_dE_dn[i] + incident.t1dE_dn[i] + eps_m1 * dEn_dt1[i];
    const cd t2dE_tr = sol.t2_dE_dn[i] + incident.t2dE_dn[i] + eps_m1 * dEn_dt2[i];
    for (int c = 0; c < 3; ++c) {
      sol.E_sc[i][c] = cf[i].n[c] * sol.E_n_sc[i] + cf[i].t1[c] * sol.E_t1_sc[i] +
                       cf[i].t2[c] * sol.E_t2_sc[i];
      sol.dE_dn_sc[i][c] = cf[i].n[c] * sol.n_dE_dn[i] + cf[i].t1[c] * sol.t1_dE_dn[i] +
                           cf[i].t2[c] * sol.t2_dE_dn[i];
      sol.E_tr[i][c] = eps_oi * cf[i].n[c] * En_tot[i] + cf[i].t1[c] * Et1_tot +
                       cf[i].t2[c] * Et2_tot;
      sol.dE_dn_tr[i][c] = cf[i].n[c] * ndE_tr + cf[i].t1[c] * t1dE_tr +
                           cf[i].t2[c] * t2dE_tr;
    }
  }
  return sol;
}

namespace {

std::vector<Vec3c> component_integrals(const QuadMesh& mesh,
                                       const std::vector<Vec3c>& E,
                                       const std::vector<Vec3c>& dE_dn, cd k,
                                       bool interior, const std::vector<Vec3>& points,
                                       const acoustics::FieldEvalConfig& config) {
  const int n = mesh.num_nodes();
  std::vector<Vec3c> out(points.size(), Vec3c::Zero());
  for (int c = 0; c < 3; ++c) {
    SurfaceField phi(n), q(n);
    for (int i = 0; i < n; ++i) {
      phi[i] = E[i][c];
      q[i] = dE_dn[i][c];
    }
    const std::vector<cd> vals =
        acoustics::representation_integral(mesh, phi, q, k, interior, points, config);
    for (std::size_t p = 0; p < points.size(); ++p) out[p][c] = vals[p];
  }
  return out;
}

} // namespace

std::vector<Vec3c> evaluate_em_field(const QuadMesh& mesh, const PecSolution& solution,
                                     const std::vector<Vec3>& points,
                                     const acoustics::FieldEvalConfig& config) {
  return component_integrals(mesh, solution.E_sc, solution.dE_dn_sc, solution.k,
                             /*interior=*/false, points, config);
}

std::vector<Vec3c> evaluate_em_field(const QuadMesh& mesh,
                                     const DielectricSolution& solution,
                                     const std::vector<Vec3>& points, bool interior,
                                     const acoustics::FieldEvalConfig& config) {
  if (interior)
    return component_integrals(mesh, solution.E_tr, solution.dE_dn_tr, solution.k_in,
                               true, points, config);
  return component_integrals(mesh, solution.E_sc, solution.dE_dn_sc, solution.k_out,
                             false, points, config);
}

double divergence_check(const QuadMesh& mesh, const PecSolution& solution,
                        const std::vector<Vec3>& points, double h,
                        const acoustics::FieldEvalConfig& config) {
  std::vector<Vec3> stencil;
  stencil.reserve(points.size() * 7);
  for (const Vec3& p : points) {
    stencil.push_back(p);
    for (int c = 0; c < 3; ++c) {
      Vec3 plus = p, minus = p;
      plus[c] += h;
      minus[c] -= h;
      stencil.push_back(plus);
      stencil.push_back(minus);
    }
  }
  const std::vector<Vec3c> E = evaluate_em_field(mesh, solution, stencil, config);

  double max_div = 0.0, max_E = 0.0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const std::size_t base = 7 * p;
    cd div = 0.0;
    for (int c = 0; c < 3; ++c)
      div += (E[base + 1 + 2 * c][c] - E[base + 2 + 2 * c][c]) / (2.0 * h);
    max_div = std::max(max_div, std::abs(div));
    max_E = std::max(max_E, E[base].norm());
  }
  if (max_E == 0.0) return 0.0;
  return max_div / (solution.k * max_E);
}

} // namespace em
} // namespace helmbem
