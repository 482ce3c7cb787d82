#include "nitsche/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <map>

#include "nitsche/errors.hpp"

namespace nitsche {

void write_meshes(std::ostream& out, std::span<const SubdomainMesh> meshes) {
  std::size_t nodes = 0;
  std::size_t tris = 0;
  for (const auto& m : meshes) {
    nodes += m.nodes.size();
    tris += m.triangles.size();
  }
  out << std::setprecision(17);
  out << nodes << '\n';
  for (const auto& m : meshes) {
    for (const auto& p : m.nodes) out << p.x() << ' ' << p.y() << '\n';
  }
  out << tris << '\n';
  std::size_t offset = 0;
  for (const auto& m : meshes) {
    for (const auto& t : m.triangles) {
      out << offset + t[0] << ' ' << offset + t[1] << ' ' << offset + t[2] << ' ' << m.subdomain_id << '\n';
    }
    offset += m.nodes.size();
  }
}

void write_meshes(const std::filesystem::path& path, std::span<const SubdomainMesh> meshes) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_meshes(out, meshes);
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<SubdomainMesh> read_meshes(std::istream& in) {
  std::size_t n = 0;
  if (!(in >> n)) throw IoError("mesh file: missing node count");
  std::vector<Vec2> nodes(n);
  for (auto& p : nodes) {
    if (!(in >> p.x() >> p.y())) throw IoError("mesh file: truncated node list");
  }
  std::size_t t = 0;
  if (!(in >> t)) throw IoError("mesh file: missing triangle count");
  // subdomain -> (global node -> local node), triangles
  std::map<int, std::map<std::size_t, int>> local;
  std::map<int, std::vector<std::array<std::size_t, 3>>> tris;
  for (std::size_t k = 0; k < t; ++k) {
    std::array<std::size_t, 3> v{};
    int sub = 0;
    if (!(in >> v[0] >> v[1] >> v[2] >> sub)) throw IoError("mesh file: truncated triangle list");
    for (auto i : v) {
      if (i >= n) throw IoError("mesh file: triangle references node out of range");
      local[sub].emplace(i, 0);
    }
    tris[sub].push_back(v);
  }
  std::vector<SubdomainMesh> out;
  for (auto& [sub, map] : local) {
    SubdomainMesh m;
    m.subdomain_id = sub;
    for (auto& [global, idx] : map) {
      idx = static_cast<int>(m.nodes.size());
      m.nodes.push_back(nodes[global]);
    }
    for (const auto& v : tris[sub]) m.triangles.push_back({map[v[0]], map[v[1]], map[v[2]]});
    retag_boundary(m, {});
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<SubdomainMesh> read_meshes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_meshes(in);
}

}  // namespace nitsche
