#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "helmbem/types.hpp"

namespace helmbem {

/// Closed surface mesh of curved six-node triangles. Local node order:
/// corners 0,1,2 then mid-edge nodes 3 (between 0-1), 4 (1-2), 5 (2-0).
struct QuadMesh {
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 6>> elements;
  double characteristic_length = 1.0;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }

  /// FNV-1a over node coordinates and connectivity.
  std::uint64_t fingerprint() const;
};

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Geometry of one element at a reference point.
struct ShapeEval {
  Vec3 position;
  Vec3 d_xi;     // d position / d xi
  Vec3 d_eta;    // d position / d eta
  Vec3 normal;   // unit, outward (away from the enclosed volume)
  double jacobian; // area element |d_xi x d_eta|
};

/// Values of the six quadratic Lagrange shape functions.
void shape_values(double xi, double eta, double N[6]);
/// Their reference-coordinate gradients.
void shape_gradients(double xi, double eta, double dN_dxi[6], double dN_deta[6]);
/// Reference second derivatives (constant over the element).
void shape_second_derivatives(double d2_xixi[6], double d2_xieta[6], double d2_etaeta[6]);

ShapeEval shape_eval(const QuadMesh& mesh, int element, double xi, double eta);

/// Interpolate a nodal scalar field inside an element.
cd interpolate(const QuadMesh& mesh, const SurfaceField& field, int element,
               double xi, double eta);

/// Checks connectivity bounds, node usage, edge closure/orientation,
/// mid-edge-node consistency and Jacobian positivity. Throws MeshError.
void validate_mesh(const QuadMesh& mesh);

/// Icosahedron-based sphere mesh: 20*4^refinement elements, all nodes
/// (including mid-edge) projected onto the sphere.
QuadMesh generate_sphere_mesh(double radius, int refinement);

/// Elements adjacent to each node, with the local index of the node
/// inside each element.
struct NodeAdjacency {
  std::vector<std::vector<std::pair<int, int>>> elems; // node -> (element, local)
};
NodeAdjacency build_adjacency(const QuadMesh& mesh);

// --- revolved geometries -----------------------------------------------------

/// Sphere-with-neck cavity. All lengths are in units of the scale `a`
/// passed to the generator; the bore tapers from taper_bottom (where it
/// pierces the inner sphere) to taper_top at the opening, and the rim
/// between bore and outer wall is rounded with the given fillet radius.
struct ResonatorParams {
  double outer_radius = 1.08;
  double inner_radius = 0.92;
  double neck_length = 0.67;     // outer-sphere junction to the top plane
  double taper_bottom = 0.32;
  double taper_top = 0.168;
  double fillet = 0.04;
  double outer_neck_base = 0.48; // outer wall radius at the outer sphere
  int refinement = 2;
};

QuadMesh generate_resonator_mesh(double a, const ResonatorParams& params = {});

/// Volumes from the analytic meridian (independent of any mesh): the
/// shell solid and the spherical cavity below the bore junction.
struct ResonatorVolumes {
  double solid = 0.0;
  double cavity = 0.0;
};
ResonatorVolumes resonator_reference_volumes(double a, const ResonatorParams& params = {});

/// Closed paraboloid dish (z = rho^2/(4 focal)) of the given rim radius
/// and wall thickness, vertex at the origin, opening towards +z.
QuadMesh generate_dish_mesh(double rim_radius, double focal, double thickness,
                            int refinement);

QuadMesh transform_mesh(const QuadMesh& mesh, const Eigen::Matrix3d& rotation,
                        const Vec3& translation);
QuadMesh merge_meshes(const QuadMesh& a, const QuadMesh& b);

// --- text formats -----------------------------------------------------------

enum class MeshFormat { NativeText, MshV2 };

QuadMesh load_mesh(const std::string& path, MeshFormat format);
void save_mesh_native(const QuadMesh& mesh, const std::string& path);

} // namespace helmbem
