#pragma once

#include <vector>

#include "helmbem/assembly.hpp"
#include "helmbem/frames.hpp"
#include "helmbem/mesh.hpp"
#include "helmbem/types.hpp"

namespace helmbem {
namespace acoustics {

struct PlaneWave {
  cd k = 1.0;
  Vec3 direction{0.0, 0.0, 1.0}; // unit propagation direction
  cd amplitude = 1.0;
};

enum class Formulation { Standard, BurtonMiller };

/// Surface solution of a hard-scatterer problem. dphi_dn is the normal
/// derivative along the collocation normal (out of the fluid).
struct ScatterSolution {
  SurfaceField phi;     // scattered potential at the nodes
  SurfaceField dphi_dn; // prescribed by the hard boundary condition
  cd k = 0.0;
  Formulation formulation = Formulation::Standard;
  double solve_residual = 0.0;
  double condition_estimate = 0.0;
};

/// Incident plane-wave trace: phi and its derivative along the
/// collocation normal at every node.
void incident_scalar(const PlaneWave& wave, const QuadMesh& mesh,
                     const std::vector<NodeFrame>& frames,
                     SurfaceField& phi_inc, SurfaceField& dphi_inc_dn);

struct SolveOptions {
  Formulation formulation = Formulation::Standard;
  double beta_override = 0.0; // 0 = min(0.5 a, 1/k)
  AssemblyConfig quadrature;
};

/// Exterior scattering from a sound-hard surface:
/// d(phi_tot)/dn = 0, so d(phi_sc)/dn = -d(phi_inc)/dn.
ScatterSolution solve_hard(const QuadMesh& mesh, const std::vector<NodeFrame>& frames,
                           const PlaneWave& wave, const SolveOptions& options = {});

/// Radiation problem: the normal derivative is prescribed directly
/// (transducer surfaces and similar).
ScatterSolution solve_neumann(const QuadMesh& mesh, const std::vector<NodeFrame>& frames,
                              cd k, const SurfaceField& dphi_dn,
                              const SolveOptions& options = {});

struct FieldEvalConfig {
  int far_degree = 8;
  int max_depth = 10;            // adaptive subdivision cap for near points
  double on_surface_tol = 1e-9;  // times characteristic length
};

/// Exterior representation of the scattered potential at off-surface
/// points. Points closer than half an element diameter use recursively
/// subdivided quadrature. Throws std::invalid_argument for points on the
/// surface (distance below on_surface_tol * a).
std::vector<cd> evaluate_field(const QuadMesh& mesh, const ScatterSolution& solution,
                               const std::vector<Vec3>& points,
                               const FieldEvalConfig& config = {});

/// The raw representation integral
///   phi(x0) = s/(4 pi) [ int q G_k dS - int phi dG_k/dn dS ],
/// with s = +1 for the exterior domain and -1 for the interior one and
/// q the derivative along the collocation normal. Shared by the scalar
/// and per-Cartesian-component electromagnetic evaluations.
std::vector<cd> representation_integral(const QuadMesh& mesh, const SurfaceField& phi,
                                        const SurfaceField& q, cd k, bool interior,
                                        const std::vector<Vec3>& points,
                                        const FieldEvalConfig& config = {});

struct SweepRow {
  double ka = 0.0;
  double max_abs_total = 0.0; // max |phi_inc + phi_sc| over the probes
  int argmax_probe = -1;
};

/// One hard-scatter solve per ka; records the largest total-field
/// magnitude over the probe points.
std::vector<SweepRow> sweep(const QuadMesh& mesh, const std::vector<NodeFrame>& frames,
                            const std::vector<double>& ka_values,
                            const Vec3& direction, const std::vector<Vec3>& probes,
                            const SolveOptions& options = {});

} // namespace acoustics
} // namespace helmbem
