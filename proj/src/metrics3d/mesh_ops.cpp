#include <map>
#include <numbers>
#include <tuple>

#include "common/error.hpp"
#include "metrics3d/mesh.hpp"

namespace occbench::metrics3d {

Aabb TriMesh::bounds() const {
  Aabb b;
  for (const auto& v : vertices) b.expand(v);
  return b;
}

double TriMesh::triangle_area(size_t f) const {
  const auto& t = faces[f];
  return 0.5 * norm(cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]));
}

double TriMesh::area() const {
  double a = 0.0;
  for (size_t f = 0; f < faces.size(); ++f) a += triangle_area(f);
  return a;
}

void validate_mesh(const TriMesh& mesh, const std::string& where) {
  if (mesh.faces.empty()) throw FormatError(where + ": mesh has no faces");
  for (size_t f = 0; f < mesh.faces.size(); ++f)
    for (uint32_t i : mesh.faces[f])
      if (i >= mesh.vertices.size())
        throw FormatError(where + ": face " + std::to_string(f) + " index " + std::to_string(i) + " out of range");
  if (!(mesh.area() > 0.0)) throw FormatError(where + ": mesh has zero surface area");
}

TriMesh normalize_mesh(const TriMesh& mesh) {
  const Aabb b = mesh.bounds();
  if (!b.valid()) throw InvalidArgument("cannot normalize a mesh without vertices");
  const Vec3 e = b.extent();
  const double longest = std::max({e.x, e.y, e.z});
  if (!(longest > 0.0)) throw InvalidArgument("cannot normalize a mesh with zero-extent bounding box");
  const Vec3 c = b.center();
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = (v - c) * (1.0 / longest);
  return out;
}

TriMesh rotate_z(const TriMesh& mesh, double angle_deg) {
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double c = std::cos(a), s = std::sin(a);
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
  return out;
}

TriMesh translated(const TriMesh& mesh, Vec3 offset) {
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = v + offset;
  return out;
}

TriMesh scaled(const TriMesh& mesh, double factor) {
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = v * factor;
  return out;
}

size_t boundary_edge_count(const TriMesh& mesh) {
  // Weld by exact position so meshes with split vertices (per-face normals or
  // UVs) are not reported as open.
  std::map<std::tuple<double, double, double>, uint32_t> ids;
  std::vector<uint32_t> weld(mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const auto& v = mesh.vertices[i];
    weld[i] = ids.emplace(std::make_tuple(v.x, v.y, v.z), static_cast<uint32_t>(ids.size())).first->second;
  }
  std::map<std::pair<uint32_t, uint32_t>, int> uses;
  for (const auto& f : mesh.faces)
    for (int k = 0; k < 3; ++k) {
      uint32_t a = weld[f[k]], b = weld[f[(k + 1) % 3]];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      ++uses[{a, b}];
    }
  size_t open = 0;
  for (const auto& [edge, n] : uses) open += n == 1 ? 1 : 0;
  return open;
}

TriMesh make_box(Vec3 lo, Vec3 hi) {
  TriMesh m;
  for (int i = 0; i < 8; ++i)
    m.vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
  // Outward-facing, counter-clockwise.
  m.faces = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
             {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

TriMesh make_icosphere(Vec3 center, double radius, int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p = p * (1.0 / norm(p));
  std::vector<Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                         {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                         {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<uint32_t, uint32_t>, uint32_t> mid;
    auto midpoint = [&](uint32_t a, uint32_t b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      Vec3 p = (v[a] + v[b]) * 0.5;
      v.push_back(p * (1.0 / norm(p)));
      return mid[key] = static_cast<uint32_t>(v.size() - 1);
    };
    std::vector<Face> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      uint32_t a = midpoint(tri[0], tri[1]), b = midpoint(tri[1], tri[2]), c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  TriMesh m;
  for (const auto& p : v) m.vertices.push_back(center + p * radius);
  m.faces = std::move(f);
  return m;
}

}  // namespace occbench::metrics3d
