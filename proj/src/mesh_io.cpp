#include <fstream>
#include <map>
#include <sstream>

#include "helmbem/mesh.hpp"

namespace helmbem {

namespace {

QuadMesh load_native(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file: " + path);
  int n = 0, e = 0;
  if (!(in >> n >> e) || n <= 0 || e <= 0)
    throw MeshError("parse error in " + path + ": expected 'N E' header");
  QuadMesh mesh;
  mesh.nodes.resize(n);
  for (int i = 0; i < n; ++i)
    if (!(in >> mesh.nodes[i][0] >> mesh.nodes[i][1] >> mesh.nodes[i][2]))
      throw MeshError("parse error in " + path + ": node " + std::to_string(i));
  mesh.elements.resize(e);
  for (int i = 0; i < e; ++i)
    for (int a = 0; a < 6; ++a)
      if (!(in >> mesh.elements[i][a]))
        throw MeshError("parse error in " + path + ": element " + std::to_string(i));
  return mesh;
}

QuadMesh load_msh2(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file: " + path);

  QuadMesh mesh;
  std::map<long, int> id_map;
  std::string line;
  bool saw_nodes = false, saw_elements = false;
  while (std::getline(in, line)) {
    if (line.rfind("$Nodes", 0) == 0) {
      saw_nodes = true;
      int n = 0;
      in >> n;
      for (int i = 0; i < n; ++i) {
        long id;
        double x, y, z;
        if (!(in >> id >> x >> y >> z)) throw MeshError("msh parse error in $Nodes");
        id_map[id] = mesh.num_nodes();
        mesh.nodes.push_back({x, y, z});
      }
    } else if (line.rfind("$Elements", 0) == 0) {
      saw_elements = true;
      int n = 0;
      in >> n;
      std::getline(in, line);
      for (int i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw MeshError("msh parse error in $Elements");
        std::istringstream ls(line);
        long id;
        int type, ntags;
        if (!(ls >> id >> type >> ntags)) throw MeshError("msh parse error in $Elements");
        for (int t = 0; t < ntags; ++t) {
          long tag;
          ls >> tag;
        }
        if (type != 9) {
          // skip lower-dimensional entities quietly, refuse other surfaces
          if (type == 2 || type == 3 || type == 16)
            throw MeshError("unsupported element type " + std::to_string(type) +
                            " (only 6-node triangles, type 9)");
          continue;
        }
        std::array<long, 6> ids;
        for (auto& v : ids)
          if (!(ls >> v)) throw MeshError("msh parse error: short type-9 element");
        std::array<int, 6> conn;
        for (int a = 0; a < 6; ++a) {
          auto it = id_map.find(ids[a]);
          if (it == id_map.end()) throw MeshError("msh element references unknown node");
          conn[a] = it->second;
        }
        mesh.elements.push_back(conn);
      }
    }
  }
  if (!saw_nodes || !saw_elements)
    throw MeshError("parse error in " + path + ": missing $Nodes/$Elements block");
  if (mesh.elements.empty()) throw MeshError("no 6-node triangles found in " + path);
  return mesh;
}

} // namespace

QuadMesh load_mesh(const std::string& path, MeshFormat format) {
  QuadMesh mesh = (format == MeshFormat::NativeText) ? load_native(path) : load_msh2(path);
  validate_mesh(mesh);
  return mesh;
}

void save_mesh_native(const QuadMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file: " + path);
  out.precision(17);
  out << mesh.num_nodes() << " " << mesh.num_elements() << "\n";
  for (const auto& x : mesh.nodes) out << x[0] << " " << x[1] << " " << x[2] << "\n";
  for (const auto& e : mesh.elements) {
    for (int a = 0; a < 6; ++a) out << e[a] << (a < 5 ? ' ' : '\n');
  }
}

} // namespace helmbem
