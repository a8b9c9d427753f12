#include "helmbem/frames.hpp"

#include <cmath>
#include <set>

namespace helmbem {

namespace {

const double ref_xi[6] = {0.0, 1.0, 0.0, 0.5, 0.5, 0.0};
const double ref_eta[6] = {0.0, 0.0, 1.0, 0.0, 0.5, 0.5};

// 3x3 curvature tensor of one element at a reference point, measured
// against the inward direction so convex bodies come out positive.
Eigen::Matrix3d element_curvature_tensor(const QuadMesh& mesh, int elem,
                                         const ShapeEval& se) {
  double d2xx[6], d2xe[6], d2ee[6];
  shape_second_derivatives(d2xx, d2xe, d2ee);
  Vec3 x_xx = Vec3::Zero(), x_xe = Vec3::Zero(), x_ee = Vec3::Zero();
  const auto& conn = mesh.elements[elem];
  for (int a = 0; a < 6; ++a) {
    const Vec3& x = mesh.nodes[conn[a]];
    x_xx += d2xx[a] * x;
    x_xe += d2xe[a] * x;
    x_ee += d2ee[a] * x;
  }

  Eigen::Matrix2d I;
  I << se.d_xi.dot(se.d_xi), se.d_xi.dot(se.d_eta),
       se.d_xi.dot(se.d_eta), se.d_eta.dot(se.d_eta);
  Eigen::Matrix2d II;
  II << -x_xx.dot(se.normal), -x_xe.dot(se.normal),
        -x_xe.dot(se.normal), -x_ee.dot(se.normal);

  Eigen::Matrix<double, 3, 2> B;
  B.col(0) = se.d_xi;
  B.col(1) = se.d_eta;
  const Eigen::Matrix2d Iinv = I.inverse();
  return B * Iinv * II * Iinv * B.transpose();
}

// Weighted least-squares surface patch in the (t1, t2, n) frame around
// the node (which sits exactly at the patch origin):
//   w = d u + e v + (a u^2 + 2b uv + c v^2)/2 + higher-order terms.
// Quartic terms keep them from aliasing into the curvatures; when the
// stencil cannot support them the basis degrades to the plain quadric.
// The weight localises the fit to roughly the first ring, the second
// ring stabilising the system. Returns the number of basis functions
// used (0 on failure); coeffs[0..4] hold the slope and curvature terms
// in physical units.
int fit_patch(const QuadMesh& mesh, int node, const std::vector<int>& stencil,
              double ring_h, const Vec3& n0, const Vec3& t1, const Vec3& t2,
              Eigen::VectorXd& coeffs) {
  const int m = static_cast<int>(stencil.size());
  if (m < 7 || !(ring_h > 0.0)) return 0;
  for (const int nb : {14, 5}) {
    if (m < nb + 2) continue;
    Eigen::MatrixXd A(m, nb);
    Eigen::VectorXd b(m);
    const Vec3 x0 = mesh.nodes[node];
    for (int r = 0; r < m; ++r) {
      const Vec3 d = mesh.nodes[stencil[r]] - x0;
      const double u = t1.dot(d) / ring_h, v = t2.dot(d) / ring_h;
      const double w = n0.dot(d) / ring_h;
      const double rho2 = u * u + v * v;
      const double wt = 1.0 / ((rho2 + 0.25) * (rho2 + 0.25));
      int c = 0;
      A(r, c++) = wt * u;
      A(r, c++) = wt * v;
      A(r, c++) = wt * 0.5 * u * u;
      A(r, c++) = wt * u * v;
      A(r, c++) = wt * 0.5 * v * v;
      if (nb == 14) {
        A(r, c++) = wt * u * u * u;
        A(r, c++) = wt * u * u * v;
        A(r, c++) = wt * u * v * v;
        A(r, c++) = wt * v * v * v;
        A(r, c++) = wt * u * u * u * u;
        A(r, c++) = wt * u * u * u * v;
        A(r, c++) = wt * u * u * v * v;
        A(r, c++) = wt * u * v * v * v;
        A(r, c++) = wt * v * v * v * v;
      }
      b(r) = wt * w;
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < nb) continue;
    coeffs = qr.solve(b);
    coeffs[2] /= ring_h;
    coeffs[3] /= ring_h;
    coeffs[4] /= ring_h;
    return nb;
  }
  return 0;
}

} // namespace

std::vector<NodeFrame> node_frames(const QuadMesh& mesh) {
  const NodeAdjacency adj = build_adjacency(mesh);
  std::vector<NodeFrame> frames(mesh.num_nodes());

  // averaged normals first; the patch fits below filter their stencils
  // with them so creases do not leak into smooth regions
  std::vector<Vec3> avg_normal(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const auto& elems = adj.elems[i];
    if (elems.empty()) throw MeshError("node without adjacent elements");
    Vec3 n_sum = Vec3::Zero();
    double w_sum = 0.0;
    for (const auto& [e, local] : elems) {
      const ShapeEval se = shape_eval(mesh, e, ref_xi[local], ref_eta[local]);
      n_sum += se.jacobian * se.normal;
      w_sum += se.jacobian;
    }
    if (n_sum.norm() < 0.1 * w_sum)
      throw MeshError("degenerate frame at node " + std::to_string(i) +
                      " (adjacent normals nearly cancel)");
    avg_normal[i] = n_sum.normalized();
  }

  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const auto& elems = adj.elems[i];
    Eigen::Matrix3d K_sum = Eigen::Matrix3d::Zero();
    double w_sum = 0.0;
    for (const auto& [e, local] : elems) {
      const ShapeEval se = shape_eval(mesh, e, ref_xi[local], ref_eta[local]);
      K_sum += se.jacobian * element_curvature_tensor(mesh, e, se);
      w_sum += se.jacobian;
    }

    NodeFrame f;
    f.n = avg_normal[i];

    // first tangent from the lowest-indexed adjacent element
    int e0 = elems[0].first, l0 = elems[0].second;
    for (const auto& [e, local] : elems)
      if (e < e0) { e0 = e; l0 = local; }
    const ShapeEval se0 = shape_eval(mesh, e0, ref_xi[l0], ref_eta[l0]);
    auto set_tangents = [&f, &se0]() {
      Vec3 t1 = se0.d_xi - se0.d_xi.dot(f.n) * f.n;
      if (t1.norm() < 1e-12) t1 = se0.d_eta - se0.d_eta.dot(f.n) * f.n;
      f.t1 = t1.normalized();
      f.t2 = f.n.cross(f.t1);
    };
    set_tangents();

    // two-ring neighbour stencil for the patch fit, dropping nodes whose
    // own normal points too far away (crease guards)
    std::set<int> stencil_set;
    for (const auto& [e, local] : elems)
      for (int a = 0; a < 6; ++a) {
        const int j = mesh.elements[e][a];
        for (const auto& [e2, l2] : adj.elems[j])
          for (int a2 = 0; a2 < 6; ++a2) stencil_set.insert(mesh.elements[e2][a2]);
      }
    stencil_set.erase(i);
    std::vector<int> stencil;
    stencil.reserve(stencil_set.size());
    for (const int j : stencil_set)
      if (avg_normal[j].dot(f.n) > 0.75) stencil.push_back(j);

    // first-ring spacing sets the fit's localisation length
    double ring_h = 0.0;
    int ring_count = 0;
    for (const auto& [e, local] : elems)
      for (int a = 0; a < 6; ++a)
        if (mesh.elements[e][a] != i) {
          ring_h += (mesh.nodes[mesh.elements[e][a]] - mesh.nodes[i]).norm();
          ++ring_count;
        }
    ring_h /= std::max(ring_count, 1);

    Eigen::VectorXd q;
    if (fit_patch(mesh, i, stencil, ring_h, f.n, f.t1, f.t2, q) > 0) {
      // refine the normal with the fitted slope, then re-project tangents
      const Vec3 n_fit = (f.n - q[0] * f.t1 - q[1] * f.t2).normalized();
      const Vec3 t1_old = f.t1, t2_old = f.t2;
      f.n = n_fit;
      set_tangents();
      // curvature against the inward direction: the fitted surface bends
      // away from an outward normal, so flip the sign of the Hessian
      Eigen::Matrix3d K3 = -(q[2] * t1_old * t1_old.transpose() +
                             q[3] * (t1_old * t2_old.transpose() + t2_old * t1_old.transpose()) +
                             q[4] * t2_old * t2_old.transpose());
      f.kappa1 = f.t1.dot(K3 * f.t1);
      f.kappa2 = f.t2.dot(K3 * f.t2);
      f.kappa = f.kappa1 + f.kappa2;
    } else {
      // fall back to the averaged element forms
      Eigen::Matrix3d K = K_sum / w_sum;
      K = 0.5 * (K + K.transpose()).eval();
      f.kappa1 = f.t1.dot(K * f.t1);
      f.kappa2 = f.t2.dot(K * f.t2);
      f.kappa = f.kappa1 + f.kappa2;
    }
    frames[i] = f;
  }
  return frames;
}

std::vector<NodeFrame> collocation_frames(const std::vector<NodeFrame>& frames) {
  std::vector<NodeFrame> out(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const NodeFrame& f = frames[i];
    out[i].n = -f.n;
    out[i].t1 = f.t2;
    out[i].t2 = f.t1;
    out[i].kappa = f.kappa;
    out[i].kappa1 = f.kappa2;
    out[i].kappa2 = f.kappa1;
  }
  return out;
}

} // namespace helmbem
