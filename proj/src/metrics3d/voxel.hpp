#pragma once

#include <cstdint>
#include <vector>

#include "metrics3d/mesh.hpp"

namespace occbench::metrics3d {

/// N^3 occupancy over an axis-aligned box; x varies fastest.
struct VoxelGrid {
  int resolution = 0;
  Aabb bounds;
  std::vector<uint8_t> occupancy;

  size_t index(int i, int j, int k) const {
    return (static_cast<size_t>(k) * resolution + j) * resolution + i;
  }
  bool occupied(int i, int j, int k) const { return occupancy[index(i, j, k)] != 0; }
  Vec3 voxel_size() const { return bounds.extent() * (1.0 / resolution); }
  Vec3 center(int i, int j, int k) const;
  size_t count() const;
  double occupied_fraction() const;
};

struct VoxelizeStats {
  size_t jittered_rows = 0;    // rows re-cast after a grazing hit
  size_t unresolved_rows = 0;  // rows still degenerate after every jitter attempt
};

/// A voxel is occupied iff its centre is inside the mesh by crossing-count
/// parity along a +x ray. Rays that graze an edge or vertex are re-cast with a
/// deterministic sub-voxel offset hashed from the row index. Meshes are
/// assumed closed; open meshes produce parity artifacts.
VoxelGrid voxelize(const TriMesh& mesh, int resolution, const Aabb& bounds, int workers = 1,
                   VoxelizeStats* stats = nullptr);

/// Union bounding box of both meshes, padded by 5% of the extent per side.
Aabb shared_bounds(const TriMesh& a, const TriMesh& b);

/// |A and B| / |A or B| over grids on the shared padded bounds. No
/// normalization is applied here. Throws EmptyInputError("no occupied voxels")
/// when both grids are empty.
double volume_iou(const TriMesh& a, const TriMesh& b, int resolution = 64, int workers = 1);

/// IoU of two grids over the same lattice.
double grid_iou(const VoxelGrid& a, const VoxelGrid& b);

}  // namespace occbench::metrics3d
