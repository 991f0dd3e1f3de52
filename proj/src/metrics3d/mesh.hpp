#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace occbench::metrics3d {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) { return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

struct Aabb {
  Vec3 min{INFINITY, INFINITY, INFINITY};
  Vec3 max{-INFINITY, -INFINITY, -INFINITY};

  void expand(Vec3 p) {
    for (int i = 0; i < 3; ++i) {
      min[i] = std::min(min[i], p[i]);
      max[i] = std::max(max[i], p[i]);
    }
  }
  void expand(const Aabb& b) {
    expand(b.min);
    expand(b.max);
  }
  Vec3 extent() const { return max - min; }
  Vec3 center() const { return (min + max) * 0.5; }
  bool valid() const { return min.x <= max.x && min.y <= max.y && min.z <= max.z; }
};

using Face = std::array<uint32_t, 3>;

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  Aabb bounds() const;
  double area() const;
  double triangle_area(size_t f) const;
};

/// OBJ (v/f records, polygons fan-triangulated, negative indices allowed) or
/// PLY (ascii / binary_little_endian / binary_big_endian). Throws
/// FormatError naming the offending line or element.
TriMesh load_mesh(const std::filesystem::path& path);
TriMesh load_obj(const std::filesystem::path& path);
TriMesh load_ply(const std::filesystem::path& path);

/// Checks indices and rejects meshes without faces or with zero total area.
void validate_mesh(const TriMesh& mesh, const std::string& where);

void write_obj(const std::filesystem::path& path, const TriMesh& mesh);

/// Centres the bounding box at the origin and scales the longest edge to 1.
/// Throws InvalidArgument on a zero-extent box.
TriMesh normalize_mesh(const TriMesh& mesh);

/// Rotation about +z (the up axis) by angle_deg, counter-clockwise.
TriMesh rotate_z(const TriMesh& mesh, double angle_deg);

TriMesh translated(const TriMesh& mesh, Vec3 offset);
TriMesh scaled(const TriMesh& mesh, double factor);

/// Counts edges used by exactly one face (vertices matched by position).
size_t boundary_edge_count(const TriMesh& mesh);
inline bool is_watertight(const TriMesh& mesh) { return boundary_edge_count(mesh) == 0; }

/// Test shapes.
TriMesh make_box(Vec3 min, Vec3 max);
TriMesh make_icosphere(Vec3 center, double radius, int subdivisions);

}  // namespace occbench::metrics3d
