#pragma once

#include <cstdint>
#include <vector>

#include "common/rng.hpp"
#include "metrics3d/mesh.hpp"

namespace occbench::metrics3d {

struct PointSample {
  std::vector<Vec3> points;
  double source_area = 0.0;
};

/// Area-weighted triangle choice, then uniform barycentric sampling inside
/// the triangle. Deterministic per key. When face_out is given it receives the
/// source face of each point.
PointSample sample_surface(const TriMesh& mesh, size_t n, RngKey key, std::vector<uint32_t>* face_out = nullptr);

struct ChamferOptions {
  bool squared = false;  // mean of squared distances instead of distances
  int workers = 1;
};

/// 0.5 * (mean_{p in a} d(p, b) + mean_{q in b} d(q, a)) with exact
/// nearest neighbours from a kd-tree. Throws InvalidArgument on empty input.
double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b, const ChamferOptions& options = {});
inline double chamfer(const PointSample& a, const PointSample& b, const ChamferOptions& options = {}) {
  return chamfer(a.points, b.points, options);
}

/// Nearest-neighbour distance from every query point to the reference set.
std::vector<double> nearest_distances(const std::vector<Vec3>& queries, const std::vector<Vec3>& reference,
                                      int workers = 1);

}  // namespace occbench::metrics3d
