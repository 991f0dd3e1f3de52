#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "metrics3d/mesh.hpp"

namespace occbench::metrics3d {

inline double squared_distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

/// Static 3D kd-tree for exact nearest-neighbour queries. Keeps its own copy
/// of the points; splits on the widest axis at the median.
class KdTree {
public:
  explicit KdTree(std::span<const Vec3> points, size_t leaf_size = 12);

  struct Hit {
    uint32_t index;
    double squared_distance;
  };

  /// Exact nearest neighbour; ties resolve to the lowest point index.
  Hit nearest(const Vec3& query) const;

  size_t size() const { return points_.size(); }

private:
  struct Node {
    uint32_t begin, end;  // range into order_
    int axis;             // -1 for leaves
    double split;
    uint32_t left, right;
  };

  uint32_t build(uint32_t begin, uint32_t end);
  void search(uint32_t node, const Vec3& q, Hit& best) const;

  std::vector<Vec3> points_;
  std::vector<uint32_t> order_;
  std::vector<Node> nodes_;
  size_t leaf_size_;
};

}  // namespace occbench::metrics3d
