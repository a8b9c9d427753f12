#pragma once

#include <cstdint>
#include <Eigen/Sparse>

#include "helmbem/frames.hpp"
#include "helmbem/mesh.hpp"
#include "helmbem/types.hpp"

namespace helmbem {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quadrature controls for collocation assembly.
struct AssemblyConfig {
  int far_degree = 8;    // plain Gauss rule away from the collocation node
  int near_degree = 8;   // rule applied per sub-triangle when subdividing
  int duffy_points = 8;  // tensor points per direction on self elements
  int near_depth = 3;    // subdivision depth for the closest non-self ring
  int max_depth = 6;     // proximity ladder cap (thin gaps)
};

/// Dense collocation matrices relating surface values to surface normal
/// derivatives, H phi = G q. The normal derivative convention for q (and
/// for all kernel normals inside H, G) is the collocation normal: the one
/// pointing out of the propagation domain, i.e. minus the mesh-outward
/// frame normal. Exterior assembly differs from interior only by +4*pi on
/// the diagonal of H.
struct BemMatrices {
  MatXc H;
  MatXc G;
  cd k = 0.0;
  bool exterior = true;
  std::uint64_t mesh_fingerprint = 0;
};

BemMatrices assemble(const QuadMesh& mesh, const std::vector<NodeFrame>& frames,
                     cd k, bool exterior, const AssemblyConfig& config = {});

/// Combined-equation pair L phi = R q mixing the standard equation with
/// the normal-derivative equation weighted by i*beta; removes the interior
/// resonances of the plain exterior operator.
struct BurtonMillerMatrices {
  MatXc L;
  MatXc R;
  cd k = 0.0;
  double beta = 0.0;
  std::uint64_t mesh_fingerprint = 0;
};

BurtonMillerMatrices assemble_burton_miller(const QuadMesh& mesh,
                                            const std::vector<NodeFrame>& frames,
                                            cd k, double beta, bool exterior,
                                            const AssemblyConfig& config = {});

/// beta = min(0.5 a, 1/|k|), the dimensional balance used for the
/// combined equation.
double default_beta(double characteristic_length, cd k);

/// Nodal tangential-derivative operators along the frame tangents.
/// Rows sum to zero exactly.
struct TangentialOps {
  Eigen::SparseMatrix<double, Eigen::RowMajor> D_t1;
  Eigen::SparseMatrix<double, Eigen::RowMajor> D_t2;
};

TangentialOps tangential_ops(const QuadMesh& mesh, const std::vector<NodeFrame>& frames);

/// Little-endian debug dump: two uint64 dims, then row-major (re, im)
/// doubles.
void dump_matrix_binary(const MatXc& M, const std::string& path);
MatXc load_matrix_binary(const std::string& path);

} // namespace helmbem
