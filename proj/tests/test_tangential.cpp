#include <doctest.h>

#include <cmath>

#include "helmbem/assembly.hpp"
#include "test_meshes.hpp"

using namespace helmbem;

TEST_CASE("derivative of a constant vanishes") {
  const QuadMesh mesh = generate_sphere_mesh(1.0, 1);
  const auto frames = node_frames(mesh);
  const TangentialOps ops = tangential_ops(mesh, frames);
  const VecX ones = VecX::Ones(mesh.num_nodes());
  // rows sum to zero by construction; the matvec re-sums in column order,
  // so a few ulp of roundoff remain
  CHECK((ops.D_t1 * ones).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((ops.D_t2 * ones).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("linear field on a flat face differentiates exactly") {
  const QuadMesh mesh = testmesh::box_mesh(1.0, 0.25, 4);
  auto frames = node_frames(mesh);
  // align the frame with the axes on the top face, per the premise
  std::vector<int> top_interior;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const Vec3& x = mesh.nodes[i];
    if (std::abs(x[2] - 0.25) < 1e-12) {
      frames[i].t1 = Vec3(1, 0, 0);
      frames[i].t2 = frames[i].n.cross(frames[i].t1);
      if (x[0] > 0.2 && x[0] < 0.8 && x[1] > 0.2 && x[1] < 0.8)
        top_interior.push_back(i);
    }
  }
  REQUIRE(!top_interior.empty());

  const TangentialOps ops = tangential_ops(mesh, frames);
  VecX fx(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) fx[i] = mesh.nodes[i][0];
  const VecX d1 = ops.D_t1 * fx;
  const VecX d2 = ops.D_t2 * fx;
  for (int i : top_interior) {
    CHECK(std::abs(d1[i] - 1.0) < 1e-10);
    CHECK(std::abs(d2[i]) < 1e-10);
  }
}

TEST_CASE("surface gradient of Y10 on the unit sphere") {
  const QuadMesh mesh = generate_sphere_mesh(1.0, 3);
  const auto frames = node_frames(mesh);
  const TangentialOps ops = tangential_ops(mesh, frames);
  VecX f(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) f[i] = mesh.nodes[i][2]; // cos(theta)
  const VecX d1 = ops.D_t1 * f;
  const VecX d2 = ops.D_t2 * f;
  double worst = 0.0;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    // analytic surface gradient of cos(theta) is -sin(theta) theta_hat
    const Vec3 x = mesh.nodes[i];
    const Vec3 grad_exact = Vec3(0, 0, 1) - x[2] * x; // (I - rr^T) e_z
    const Vec3 grad_num = d1[i] * frames[i].t1 + d2[i] * frames[i].t2;
    if (grad_exact.norm() < 0.3) continue; // skip near the poles of the field
    worst = std::max(worst, (grad_num - grad_exact).norm() / grad_exact.norm());
  }
  CHECK(worst < 0.02);
}
