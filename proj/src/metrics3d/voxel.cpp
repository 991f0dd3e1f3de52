#include "metrics3d/voxel.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "common/rng.hpp"

namespace occbench::metrics3d {
namespace {

constexpr int kJitterAttempts = 8;
constexpr double kGrazeTolerance = 1e-10;

struct Tri2 {
  double ay, az, by, bz, cy, cz;  // projection on the yz plane
  double ax, bx, cx;
};

enum class Cast { Miss, Hit, Graze };

// Crossing of the +x line through (y, z) with a triangle.
Cast cast(const Tri2& t, double y, double z, double& x_hit) {
  const double e0 = (t.by - y) * (t.cz - z) - (t.bz - z) * (t.cy - y);
  const double e1 = (t.cy - y) * (t.az - z) - (t.cz - z) * (t.ay - y);
  const double e2 = (t.ay - y) * (t.bz - z) - (t.az - z) * (t.by - y);
  const double area = e0 + e1 + e2;
  if (area == 0.0) return Cast::Miss;  // triangle parallel to the ray
  const double tol = kGrazeTolerance * std::abs(area);
  const bool pos = e0 > tol && e1 > tol && e2 > tol;
  const bool neg = e0 < -tol && e1 < -tol && e2 < -tol;
  if (pos || neg) {
    x_hit = (e0 * t.ax + e1 * t.bx + e2 * t.cx) / area;
    return Cast::Hit;
  }
  const bool maybe_pos = e0 >= -tol && e1 >= -tol && e2 >= -tol;
  const bool maybe_neg = e0 <= tol && e1 <= tol && e2 <= tol;
  return (maybe_pos || maybe_neg) ? Cast::Graze : Cast::Miss;
}

}  // namespace

Vec3 VoxelGrid::center(int i, int j, int k) const {
  const Vec3 s = voxel_size();
  return {bounds.min.x + (i + 0.5) * s.x, bounds.min.y + (j + 0.5) * s.y, bounds.min.z + (k + 0.5) * s.z};
}

size_t VoxelGrid::count() const { return static_cast<size_t>(std::count(occupancy.begin(), occupancy.end(), 1)); }

double VoxelGrid::occupied_fraction() const {
  return occupancy.empty() ? 0.0 : static_cast<double>(count()) / static_cast<double>(occupancy.size());
}

VoxelGrid voxelize(const TriMesh& mesh, int resolution, const Aabb& bounds, int workers, VoxelizeStats* stats) {
  if (resolution < 1) throw InvalidArgument("voxel resolution must be >= 1");
  const Vec3 extent = bounds.extent();
  if (!(extent.x > 0 && extent.y > 0 && extent.z > 0)) throw InvalidArgument("voxel bounds are degenerate");

  VoxelGrid grid{resolution, bounds, std::vector<uint8_t>(static_cast<size_t>(resolution) * resolution * resolution, 0)};
  const Vec3 size = grid.voxel_size();
  const size_t n = static_cast<size_t>(resolution);

  std::vector<Tri2> tris;
  tris.reserve(mesh.faces.size());
  // bins[k * n + j]: triangles whose yz box (grown by one voxel) covers row (j, k)
  std::vector<std::vector<uint32_t>> bins(n * n);
  for (const auto& f : mesh.faces) {
    const Vec3 a = mesh.vertices[f[0]], b = mesh.vertices[f[1]], c = mesh.vertices[f[2]];
    const auto id = static_cast<uint32_t>(tris.size());
    tris.push_back({a.y, a.z, b.y, b.z, c.y, c.z, a.x, b.x, c.x});
    const double y0 = std::min({a.y, b.y, c.y}), y1 = std::max({a.y, b.y, c.y});
    const double z0 = std::min({a.z, b.z, c.z}), z1 = std::max({a.z, b.z, c.z});
    const int j0 = std::max(0, static_cast<int>(std::floor((y0 - bounds.min.y) / size.y - 0.5)) - 1);
    const int j1 = std::min(resolution - 1, static_cast<int>(std::ceil((y1 - bounds.min.y) / size.y - 0.5)) + 1);
    const int k0 = std::max(0, static_cast<int>(std::floor((z0 - bounds.min.z) / size.z - 0.5)) - 1);
    const int k1 = std::min(resolution - 1, static_cast<int>(std::ceil((z1 - bounds.min.z) / size.z - 0.5)) + 1);
    for (int k = k0; k <= k1; ++k)
      for (int j = j0; j <= j1; ++j) bins[static_cast<size_t>(k) * n + j].push_back(id);
  }

  std::vector<VoxelizeStats> slab_stats(n);
  parallel_for(n, workers, [&](size_t k) {
    std::vector<double> hits;
    for (size_t j = 0; j < n; ++j) {
      const auto& bin = bins[k * n + j];
      if (bin.empty()) continue;
      const double yc = bounds.min.y + (static_cast<double>(j) + 0.5) * size.y;
      const double zc = bounds.min.z + (static_cast<double>(k) + 0.5) * size.z;
      bool clean = false;
      for (int attempt = 0; attempt <= kJitterAttempts && !clean; ++attempt) {
        double y = yc, z = zc;
        if (attempt > 0) {
          const RngKey key = RngKey(k * n + j).derive(static_cast<uint64_t>(attempt));
          Rng rng(key);
          y += (rng.uniform01() - 0.5) * 1e-3 * size.y;
          z += (rng.uniform01() - 0.5) * 1e-3 * size.z;
        }
        hits.clear();
        clean = true;
        for (uint32_t t : bin) {
          double x;
          const Cast c = cast(tris[t], y, z, x);
          if (c == Cast::Graze) {
            clean = false;
            break;
          }
          if (c == Cast::Hit) hits.push_back(x);
        }
        if (attempt > 0) ++slab_stats[k].jittered_rows;
      }
      if (!clean) {
        ++slab_stats[k].unresolved_rows;
        continue;
      }
      std::sort(hits.begin(), hits.end());
      for (int i = 0; i < resolution; ++i) {
        const double xc = bounds.min.x + (i + 0.5) * size.x;
        const auto above = hits.end() - std::upper_bound(hits.begin(), hits.end(), xc);
        if (above % 2 == 1) grid.occupancy[grid.index(i, static_cast<int>(j), static_cast<int>(k))] = 1;
      }
    }
  });
  if (stats) {
    *stats = {};
    for (const auto& s : slab_stats) {
      stats->jittered_rows += s.jittered_rows;
      stats->unresolved_rows += s.unresolved_rows;
    }
  }
  return grid;
}

Aabb shared_bounds(const TriMesh& a, const TriMesh& b) {
  Aabb box = a.bounds();
  box.expand(b.bounds());
  if (!box.valid()) throw InvalidArgument("meshes have no vertices");
  const Vec3 e = box.extent();
  const double longest = std::max({e.x, e.y, e.z});
  if (!(longest > 0.0)) throw InvalidArgument("meshes have a zero-extent bounding box");
  for (int i = 0; i < 3; ++i) {
    const double pad = 0.05 * (e[i] > 0.0 ? e[i] : longest);
    box.min[i] -= pad;
    box.max[i] += pad;
  }
  return box;
}

double grid_iou(const VoxelGrid& a, const VoxelGrid& b) {
  if (a.occupancy.size() != b.occupancy.size()) throw InvalidArgument("voxel grids differ in size");
  size_t inter = 0, uni = 0;
  for (size_t i = 0; i < a.occupancy.size(); ++i) {
    inter += (a.occupancy[i] & b.occupancy[i]);
    uni += (a.occupancy[i] | b.occupancy[i]);
  }
  if (uni == 0) throw EmptyInputError("no occupied voxels");
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double volume_iou(const TriMesh& a, const TriMesh& b, int resolution, int workers) {
  const Aabb box = shared_bounds(a, b);
  return grid_iou(voxelize(a, resolution, box, workers), voxelize(b, resolution, box, workers));
}

}  // namespace occbench::metrics3d
