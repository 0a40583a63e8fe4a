#include "dgschwarz/mesh_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace dgschwarz {

using nlohmann::json;

std::string mesh_to_json(const PolytopicMesh& mesh) {
  json j;
  json verts = json::array();
  for (const auto& v : mesh.vertices()) verts.push_back({v.x(), v.y()});
  j["vertices"] = std::move(verts);
  j["cells"] = mesh.cells();
  return j.dump();
}

PolytopicMesh mesh_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw MeshError(std::string("mesh json: ") + e.what());
  }
  if (!j.contains("vertices") || !j.contains("cells")) {
    throw MeshError("mesh json: expected keys 'vertices' and 'cells'");
  }
  std::vector<Vec2> verts;
  std::vector<std::vector<int>> cells;
  try {
    for (const auto& v : j.at("vertices")) {
      if (v.size() != 2) throw MeshError("mesh json: vertices must be [x, y] pairs");
      verts.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    cells = j.at("cells").get<std::vector<std::vector<int>>>();
  } catch (const json::exception& e) {
    throw MeshError(std::string("mesh json: ") + e.what());
  }
  return PolytopicMesh(std::move(verts), std::move(cells));
}

PolytopicMesh read_mesh_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return mesh_from_json(ss.str());
}

void write_mesh_json(const PolytopicMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file " + path.string());
  out << mesh_to_json(mesh) << '\n';
}

void write_partition_file(const Partition& partition, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write partition file " + path.string());
  for (int p : partition.part_of) out << p << '\n';
}

}  // namespace dgschwarz
