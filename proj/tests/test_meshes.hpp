#pragma once

#include <map>

#include "helmbem/mesh.hpp"

namespace helmbem::testmesh {

// closed axis-aligned box [0,L]x[0,L]x[0,t]; the top-face grid runs its
// xi direction along +x so frame tangents line up with the axes there
inline QuadMesh box_mesh(double L, double t, int n) {
  const int m = 2 * n;
  std::map<std::array<int, 3>, int> index;
  QuadMesh mesh;
  mesh.characteristic_length = L;
  auto node = [&](int i, int j, int k) {
    const std::array<int, 3> key{i, j, k};
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    mesh.nodes.push_back({L * i / double(m), L * j / double(m), t * k / double(m)});
    index[key] = mesh.num_nodes() - 1;
    return mesh.num_nodes() - 1;
  };
  auto face = [&](auto map) {
    for (int i = 0; i + 2 <= m; i += 2)
      for (int j = 0; j + 2 <= m; j += 2) {
        auto P = [&](int a, int b) {
          auto [x, y, z] = map(a, b);
          return node(x, y, z);
        };
        mesh.elements.push_back({P(i, j), P(i + 2, j), P(i + 2, j + 2),
                                 P(i + 1, j), P(i + 2, j + 1), P(i + 1, j + 1)});
        mesh.elements.push_back({P(i, j), P(i + 2, j + 2), P(i, j + 2),
                                 P(i + 1, j + 1), P(i + 1, j + 2), P(i, j + 1)});
      }
  };
  using A3 = std::array<int, 3>;
  face([m](int a, int b) { return A3{a, b, m}; });
  face([](int a, int b) { return A3{a, b, 0}; });
  face([m](int a, int b) { return A3{a, 0, b}; });
  face([m](int a, int b) { return A3{a, m, b}; });
  face([m](int a, int b) { return A3{0, a, b}; });
  face([m](int a, int b) { return A3{m, a, b}; });

  const Vec3 center(L / 2, L / 2, t / 2);
  for (auto& el : mesh.elements) {
    QuadMesh probe = mesh;
    probe.elements = {el};
    const auto se = shape_eval(probe, 0, 1.0 / 3.0, 1.0 / 3.0);
    if (se.normal.dot(se.position - center) < 0.0) {
      std::swap(el[1], el[2]);
      std::swap(el[3], el[5]);
    }
  }
  return mesh;
}

} // namespace helmbem::testmesh
