#include <doctest.h>

#include <cmath>

#include "helmbem/acoustics.hpp"
#include "helmbem/dense.hpp"
#include "helmbem/oracles.hpp"

using namespace helmbem;
using namespace helmbem::acoustics;

namespace {

struct Setup {
  QuadMesh mesh;
  std::vector<NodeFrame> frames;
};

const Setup& sphere2() {
  static const Setup s = [] {
    Setup out;
    out.mesh = generate_sphere_mesh(1.0, 2);
    out.frames = node_frames(out.mesh);
    return out;
  }();
  return s;
}

} // namespace

TEST_CASE("incident plane wave and its normal derivative") {
  const auto& s = sphere2();
  PlaneWave w;
  w.k = 2.0;
  w.direction = Vec3(0, 0, 1);
  SurfaceField phi, dphi;
  incident_scalar(w, s.mesh, s.frames, phi, dphi);

  SUBCASE("zero amplitude gives zero fields") {
    PlaneWave w0 = w;
    w0.amplitude = 0.0;
    SurfaceField p0, dp0;
    incident_scalar(w0, s.mesh, s.frames, p0, dp0);
    CHECK(p0.cwiseAbs().maxCoeff() == 0.0);
    CHECK(dp0.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("finite differences along the collocation normal") {
    for (int i = 0; i < s.mesh.num_nodes(); i += 61) {
      const Vec3 nc = -s.frames[i].n;
      const double h = 1e-6;
      auto field = [&](const Vec3& x) { return std::exp(iu * w.k * w.direction.dot(x)); };
      const cd fd = (field(s.mesh.nodes[i] + h * nc) - field(s.mesh.nodes[i] - h * nc)) /
                    (2.0 * h);
      CHECK(std::abs(dphi[i] - fd) <= 1e-7 * std::abs(fd));
    }
  }
}

TEST_CASE("hard sphere scattering matches the partial-wave series") {
  const auto& s = sphere2();
  PlaneWave w;
  w.k = 1.01 * pi;
  w.direction = Vec3(0, 0, 1);
  const ScatterSolution sol = solve_hard(s.mesh, s.frames, w);
  CHECK(sol.solve_residual < 1e-10);

  // forward-axis observation point at r = 1.2a
  const std::vector<Vec3> pts = {Vec3(0, 0, 1.2)};
  const cd got = evaluate_field(s.mesh, sol, pts)[0];
  const cd want = oracles::rigid_sphere_scatter(w.k.real(), 1.2, 0.0);
  // refinement 2; the acceptance suite runs the tight tolerances on
  // refinements 3 and 4
  CHECK(std::abs(got - want) < 3e-3 * std::abs(want));
}

TEST_CASE("Burton-Miller and standard solutions agree away from resonances") {
  const auto& s = sphere2();
  PlaneWave w;
  w.k = 1.0;
  w.direction = Vec3(0, 0, 1);
  SolveOptions std_opt;
  SolveOptions bm_opt;
  bm_opt.formulation = Formulation::BurtonMiller;
  const ScatterSolution a = solve_hard(s.mesh, s.frames, w, std_opt);
  const ScatterSolution b = solve_hard(s.mesh, s.frames, w, bm_opt);
  const double rel = (a.phi - b.phi).norm() / a.phi.norm();
  // 6.4e-3 at this refinement, 8.3e-4 at the next (checked below)
  CHECK(rel < 1e-2);
}

TEST_CASE("solution invariance at refinement 3" * doctest::skip(false)) {
  // the two formulations agree to 1e-3 relative L2 at ka = 1.0 once the
  // hypersingular block is resolved; this is the slowest unit test here
  QuadMesh mesh = generate_sphere_mesh(1.0, 3);
  const auto frames = node_frames(mesh);
  PlaneWave w;
  w.k = 1.0;
  w.direction = Vec3(0, 0, 1);
  SolveOptions std_opt;
  SolveOptions bm_opt;
  bm_opt.formulation = Formulation::BurtonMiller;
  const ScatterSolution a = solve_hard(mesh, frames, w, std_opt);
  const ScatterSolution b = solve_hard(mesh, frames, w, bm_opt);
  CHECK((a.phi - b.phi).norm() / a.phi.norm() < 1e-3);
}

TEST_CASE("linearity in the incident amplitude") {
  const auto& s = sphere2();
  PlaneWave w;
  w.k = 1.3;
  w.direction = Vec3(0, 1, 0);
  PlaneWave w2 = w;
  w2.amplitude = 2.0;
  const ScatterSolution a = solve_hard(s.mesh, s.frames, w);
  const ScatterSolution b = solve_hard(s.mesh, s.frames, w2);
  CHECK((b.phi - 2.0 * a.phi).norm() < 1e-10 * a.phi.norm());
}

TEST_CASE("zero amplitude gives the zero solution") {
  const auto& s = sphere2();
  PlaneWave w;
  w.k = 1.0;
  w.amplitude = 0.0;
  const ScatterSolution sol = solve_hard(s.mesh, s.frames, w);
  CHECK(sol.phi.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("low-frequency limit matches the k = 0 Neumann solve") {
  const auto& s = sphere2();
  const double ka = 1e-3;
  PlaneWave w;
  w.k = ka;
  w.direction = Vec3(0, 0, 1);
  const ScatterSolution sol = solve_hard(s.mesh, s.frames, w);

  // oracle: solve the static exterior Neumann problem for the linearised
  // boundary data, phi_sc ~ i k * psi with dpsi/dn = -(d . n_c)
  const BemMatrices m0 = assemble(s.mesh, s.frames, 0.0, true);
  VecXc q0(s.mesh.num_nodes());
  for (int i = 0; i < s.mesh.num_nodes(); ++i)
    q0[i] = -w.direction.dot(-s.frames[i].n);
  const auto res = solve_dense(m0.H, (m0.G * q0).eval());
  const VecXc psi = res.X.col(0);
  const VecXc expect = iu * cd(ka) * psi;
  CHECK((sol.phi - expect).norm() / expect.norm() < 0.01);
}

TEST_CASE("field evaluation: radiation decay and surface reciprocity") {
  const auto& s = sphere2();
  PlaneWave w;
  w.k = 1.01 * pi;
  w.direction = Vec3(0, 0, 1);
  const ScatterSolution sol = solve_hard(s.mesh, s.frames, w);

  SUBCASE("1/r decay towards the far field") {
    const std::vector<Vec3> pts = {Vec3(0, 0, 10.0), Vec3(0, 0, 100.0),
                                   Vec3(0, 0, 1000.0)};
    const auto vals = evaluate_field(s.mesh, sol, pts);
    const double ratio_near = std::abs(vals[1]) * 100.0 / (std::abs(vals[0]) * 10.0);
    const double ratio_far = std::abs(vals[2]) * 1000.0 / (std::abs(vals[1]) * 100.0);
    // interference terms still move |phi|*r by ~10% between 10a and 100a;
    // the series oracle shows the same ratio, which pins the comparison
    const double oracle_near =
        std::abs(oracles::rigid_sphere_scatter(w.k.real(), 100.0, 0.0)) * 100.0 /
        (std::abs(oracles::rigid_sphere_scatter(w.k.real(), 10.0, 0.0)) * 10.0);
    CHECK(ratio_near == doctest::Approx(oracle_near).epsilon(0.01));
    CHECK(ratio_far == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("near-surface limit reproduces the surface solution") {
    std::vector<Vec3> pts;
    std::vector<int> ids;
    for (int i = 0; i < s.mesh.num_nodes(); i += 97) {
      pts.push_back(s.mesh.nodes[i] + 1e-3 * s.frames[i].n);
      ids.push_back(i);
    }
    const auto vals = evaluate_field(s.mesh, sol, pts);
    for (std::size_t p = 0; p < pts.size(); ++p) {
      CHECK(std::abs(vals[p] - sol.phi[ids[p]]) < 0.01 * sol.phi.cwiseAbs().maxCoeff());
    }
  }
  SUBCASE("points on the surface are rejected") {
    const std::vector<Vec3> pts = {s.mesh.nodes[3]};
    CHECK_THROWS_AS(evaluate_field(s.mesh, sol, pts), std::invalid_argument);
  }
}

TEST_CASE("sweep records the expected row structure") {
  QuadMesh mesh = generate_sphere_mesh(1.0, 1);
  const auto frames = node_frames(mesh);
  const std::vector<double> kas = {0.5, 1.0};
  const std::vector<Vec3> probes = {Vec3(0, 0, 1.5), Vec3(1.6, 0, 0)};
  const auto rows = sweep(mesh, frames, kas, Vec3(0, 0, 1), probes);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ka == 0.5);
  CHECK(rows[1].ka == 1.0);
  for (const auto& r : rows) {
    CHECK(r.max_abs_total > 0.0);
    CHECK(r.argmax_probe >= 0);
    CHECK(r.argmax_probe < 2);
  }
}
