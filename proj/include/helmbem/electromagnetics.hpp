#pragma once

#include <vector>

#include "helmbem/acoustics.hpp"
#include "helmbem/assembly.hpp"
#include "helmbem/frames.hpp"
#include "helmbem/mesh.hpp"
#include "helmbem/types.hpp"

namespace helmbem {
namespace em {

/// Plane-wave incident field and its surface projections. Projections use
/// the collocation frame (normal out of the exterior domain); Cartesian
/// quantities are frame-independent.
struct EmIncident {
  double k = 1.0; // exterior wavenumber
  Vec3 direction{0.0, 0.0, 1.0};
  Vec3 polarization{1.0, 0.0, 0.0};
  std::vector<Vec3c> E;     // E_inc at nodes
  std::vector<Vec3c> dE_dn; // derivative along the collocation normal
  SurfaceField E_n, E_t1, E_t2;
  SurfaceField ndE_dn, t1dE_dn, t2dE_dn;
};

EmIncident incident_em(double k, const Vec3& direction, const Vec3& polarization,
                       const QuadMesh& mesh, const std::vector<NodeFrame>& frames);

struct EmSolveOptions {
  AssemblyConfig quadrature;
};

/// Perfect-conductor solution. The solved unknowns are E_n of the
/// scattered field and the two tangential components of its normal
/// derivative; tangential scattered components are fixed by the boundary
/// condition, the normal derivative's normal component by the surface
/// divergence constraint.
struct PecSolution {
  SurfaceField E_n_sc;
  SurfaceField t1_dE_dn;
  SurfaceField t2_dE_dn;
  std::vector<Vec3c> E_sc;     // reconstructed Cartesian scattered field
  std::vector<Vec3c> dE_dn_sc; // reconstructed Cartesian normal derivative
  double k = 0.0;
  double solve_residual = 0.0;
  double condition_estimate = 0.0;
};

PecSolution solve_pec(const QuadMesh& mesh, const std::vector<NodeFrame>& frames,
                      const EmIncident& incident, const EmSolveOptions& options = {});

/// Dielectric (equal permeabilities). eps_ratio = eps_in/eps_out.
struct DielectricSolution {
  SurfaceField E_n_sc, E_t1_sc, E_t2_sc;
  SurfaceField n_dE_dn, t1_dE_dn, t2_dE_dn;
  std::vector<Vec3c> E_sc, dE_dn_sc; // exterior scattered field
  std::vector<Vec3c> E_tr, dE_dn_tr; // transmitted field
  double k_out = 0.0;
  double k_in = 0.0;
  double eps_ratio = 1.0;
  double solve_residual = 0.0;
  double condition_estimate = 0.0;
};

DielectricSolution solve_dielectric(const QuadMesh& mesh,
                                    const std::vector<NodeFrame>& frames,
                                    const EmIncident& incident, double eps_ratio,
                                    double k_in, const EmSolveOptions& options = {});

/// Scattered field at exterior points, one representation integral per
/// Cartesian component.
std::vector<Vec3c> evaluate_em_field(const QuadMesh& mesh, const PecSolution& solution,
                                     const std::vector<Vec3>& points,
                                     const acoustics::FieldEvalConfig& config = {});

/// Dielectric version: exterior points get the scattered field, interior
/// points the transmitted one (chosen by `interior`).
std::vector<Vec3c> evaluate_em_field(const QuadMesh& mesh,
                                     const DielectricSolution& solution,
                                     const std::vector<Vec3>& points, bool interior,
                                     const acoustics::FieldEvalConfig& config = {});

/// Central-difference divergence of the scattered field, normalised by
/// |k| max|E|. Points must sit a few steps h away from the surface.
double divergence_check(const QuadMesh& mesh, const PecSolution& solution,
                        const std::vector<Vec3>& points, double h,
                        const acoustics::FieldEvalConfig& config = {});

} // namespace em
} // namespace helmbem
