#include <cmath>
#include <map>

#include "helmbem/mesh.hpp"

namespace helmbem {

namespace {

struct LinearMesh {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;
};

LinearMesh icosahedron() {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  LinearMesh m;
  m.verts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  for (auto& v : m.verts) v.normalize();
  // outward-wound faces
  m.faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  return m;
}

LinearMesh subdivide(const LinearMesh& in) {
  LinearMesh out;
  out.verts = in.verts;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec3 v = (out.verts[a] + out.verts[b]).normalized();
    out.verts.push_back(v);
    const int idx = static_cast<int>(out.verts.size()) - 1;
    midpoint[key] = idx;
    return idx;
  };
  for (const auto& f : in.faces) {
    const int m01 = mid(f[0], f[1]), m12 = mid(f[1], f[2]), m20 = mid(f[2], f[0]);
    out.faces.push_back({f[0], m01, m20});
    out.faces.push_back({m01, f[1], m12});
    out.faces.push_back({m20, m12, f[2]});
    out.faces.push_back({m01, m12, m20});
  }
  return out;
}

} // namespace

QuadMesh generate_sphere_mesh(double radius, int refinement) {
  if (!(radius > 0.0)) throw MeshError("sphere radius must be positive");
  if (refinement < 0) throw MeshError("refinement must be non-negative");

  LinearMesh lin = icosahedron();
  for (int i = 0; i < refinement; ++i) lin = subdivide(lin);

  QuadMesh mesh;
  mesh.characteristic_length = radius;
  mesh.nodes.reserve(lin.verts.size() + 3 * lin.faces.size() / 2);
  for (const auto& v : lin.verts) mesh.nodes.push_back(radius * v);

  std::map<std::pair<int, int>, int> edge_mid;
  auto mid_node = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = edge_mid.find(key);
    if (it != edge_mid.end()) return it->second;
    Vec3 v = (lin.verts[a] + lin.verts[b]).normalized() * radius;
    mesh.nodes.push_back(v);
    const int idx = mesh.num_nodes() - 1;
    edge_mid[key] = idx;
    return idx;
  };

  for (const auto& f : lin.faces) {
    mesh.elements.push_back({f[0], f[1], f[2],
                             mid_node(f[0], f[1]), mid_node(f[1], f[2]),
                             mid_node(f[2], f[0])});
  }
  return mesh;
}

} // namespace helmbem
