#include "helmbem/mesh.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <set>

#include "helmbem/quadrature.hpp"

namespace helmbem {

std::uint64_t QuadMesh::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& x : nodes) {
    double c[3] = {x[0], x[1], x[2]};
    mix(c, sizeof(c));
  }
  for (const auto& e : elements) mix(e.data(), sizeof(int) * 6);
  mix(&characteristic_length, sizeof(double));
  return h;
}

void shape_values(double xi, double eta, double N[6]) {
  const double l1 = 1.0 - xi - eta, l2 = xi, l3 = eta;
  N[0] = l1 * (2.0 * l1 - 1.0);
  N[1] = l2 * (2.0 * l2 - 1.0);
  N[2] = l3 * (2.0 * l3 - 1.0);
  N[3] = 4.0 * l1 * l2;
  N[4] = 4.0 * l2 * l3;
  N[5] = 4.0 * l3 * l1;
}

void shape_gradients(double xi, double eta, double dN_dxi[6], double dN_deta[6]) {
  const double l1 = 1.0 - xi - eta;
  dN_dxi[0] = 1.0 - 4.0 * l1;
  dN_dxi[1] = 4.0 * xi - 1.0;
  dN_dxi[2] = 0.0;
  dN_dxi[3] = 4.0 * (l1 - xi);
  dN_dxi[4] = 4.0 * eta;
  dN_dxi[5] = -4.0 * eta;

  dN_deta[0] = 1.0 - 4.0 * l1;
  dN_deta[1] = 0.0;
  dN_deta[2] = 4.0 * eta - 1.0;
  dN_deta[3] = -4.0 * xi;
  dN_deta[4] = 4.0 * xi;
  dN_deta[5] = 4.0 * (l1 - eta);
}

void shape_second_derivatives(double d2_xixi[6], double d2_xieta[6], double d2_etaeta[6]) {
  const double xx[6] = {4.0, 4.0, 0.0, -8.0, 0.0, 0.0};
  const double xe[6] = {4.0, 0.0, 0.0, -4.0, 4.0, -4.0};
  const double ee[6] = {4.0, 0.0, 4.0, 0.0, 0.0, -8.0};
  std::memcpy(d2_xixi, xx, sizeof(xx));
  std::memcpy(d2_xieta, xe, sizeof(xe));
  std::memcpy(d2_etaeta, ee, sizeof(ee));
}

ShapeEval shape_eval(const QuadMesh& mesh, int element, double xi, double eta) {
  const auto& conn = mesh.elements[element];
  double N[6], dNx[6], dNe[6];
  shape_values(xi, eta, N);
  shape_gradients(xi, eta, dNx, dNe);

  ShapeEval out;
  out.position.setZero();
  out.d_xi.setZero();
  out.d_eta.setZero();
  for (int a = 0; a < 6; ++a) {
    const Vec3& x = mesh.nodes[conn[a]];
    out.position += N[a] * x;
    out.d_xi += dNx[a] * x;
    out.d_eta += dNe[a] * x;
  }
  const Vec3 cr = out.d_xi.cross(out.d_eta);
  out.jacobian = cr.norm();
  out.normal = cr / out.jacobian;
  return out;
}

cd interpolate(const QuadMesh& mesh, const SurfaceField& field, int element,
               double xi, double eta) {
  const auto& conn = mesh.elements[element];
  double N[6];
  shape_values(xi, eta, N);
  cd v = 0.0;
  for (int a = 0; a < 6; ++a) v += N[a] * field[conn[a]];
  return v;
}

NodeAdjacency build_adjacency(const QuadMesh& mesh) {
  NodeAdjacency adj;
  adj.elems.resize(mesh.num_nodes());
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int a = 0; a < 6; ++a) adj.elems[mesh.elements[e][a]].push_back({e, a});
  return adj;
}

void validate_mesh(const QuadMesh& mesh) {
  const int n = mesh.num_nodes();
  if (n == 0 || mesh.elements.empty()) throw MeshError("mesh is empty");
  if (mesh.characteristic_length <= 0.0)
    throw MeshError("characteristic length must be positive");

  std::vector<char> used(n, 0);
  for (const auto& el : mesh.elements)
    for (int a = 0; a < 6; ++a) {
      if (el[a] < 0 || el[a] >= n) throw MeshError("element references node out of range");
      used[el[a]] = 1;
    }
  for (int i = 0; i < n; ++i)
    if (!used[i]) throw MeshError("node " + std::to_string(i) + " is not referenced");

  // Each undirected corner edge must be shared by exactly two elements with
  // opposite direction, and both must agree on the mid-edge node.
  struct EdgeInfo {
    int visits = 0;
    int orientation_sum = 0;
    int mid = -1;
  };
  std::map<std::pair<int, int>, EdgeInfo> edges;
  for (const auto& el : mesh.elements) {
    const int corner[3] = {el[0], el[1], el[2]};
    const int mid[3] = {el[3], el[4], el[5]};
    for (int s = 0; s < 3; ++s) {
      const int a = corner[s], b = corner[(s + 1) % 3], m = mid[s];
      auto& info = edges[std::minmax(a, b)];
      info.visits++;
      info.orientation_sum += (a < b) ? 1 : -1;
      if (info.mid < 0)
        info.mid = m;
      else if (info.mid != m)
        throw MeshError("mid-edge node mismatch across a shared edge");
    }
  }
  for (const auto& [key, info] : edges) {
    if (info.visits != 2)
      throw MeshError("open surface: corner edge not shared by exactly 2 elements");
    if (info.orientation_sum != 0)
      throw MeshError("non-orientable surface: shared edge traversed twice in the same direction");
  }

  const auto rule = gauss_rule(4);
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (const auto& p : rule.points) {
      const auto se = shape_eval(mesh, e, p.xi(), p.eta());
      if (!(se.jacobian > 0.0) || !std::isfinite(se.jacobian))
        throw MeshError("degenerate element " + std::to_string(e));
    }
}

} // namespace helmbem
