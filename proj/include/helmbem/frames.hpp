#pragma once

#include <vector>

#include "helmbem/mesh.hpp"
#include "helmbem/types.hpp"

namespace helmbem {

/// Orthonormal frame and curvatures at a collocation node. The normal is
/// the mesh-outward one (away from the enclosed volume); curvatures are
/// positive for a convex body (kappa = 2/R on a sphere of radius R).
struct NodeFrame {
  Vec3 n;
  Vec3 t1;
  Vec3 t2;
  double kappa = 0.0;  // kappa1 + kappa2
  double kappa1 = 0.0; // normal curvature along t1
  double kappa2 = 0.0; // normal curvature along t2
};

/// Per-node frames from area-weighted averaging of adjacent-element
/// normals and second fundamental forms. Throws MeshError for nodes whose
/// adjacent normals nearly cancel.
std::vector<NodeFrame> node_frames(const QuadMesh& mesh);

/// Frames oriented out of the exterior propagation domain: normal flipped
/// into the body, tangents swapped so n = t1 x t2 still holds, directional
/// curvatures swapped accordingly. The boundary-integral operators and all
/// solver-layer surface data use this orientation.
std::vector<NodeFrame> collocation_frames(const std::vector<NodeFrame>& frames);

} // namespace helmbem
