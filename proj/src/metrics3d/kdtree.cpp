#include "metrics3d/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "common/error.hpp"

namespace occbench::metrics3d {

KdTree::KdTree(std::span<const Vec3> points, size_t leaf_size)
    : points_(points.begin(), points.end()), order_(points.size()), leaf_size_(std::max<size_t>(1, leaf_size)) {
  if (points_.empty()) throw InvalidArgument("kd-tree over an empty point set");
  if (points_.size() > std::numeric_limits<uint32_t>::max()) throw InvalidArgument("too many points for kd-tree");
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * points_.size() / leaf_size_ + 1);
  build(0, static_cast<uint32_t>(points_.size()));
}

uint32_t KdTree::build(uint32_t begin, uint32_t end) {
  const auto id = static_cast<uint32_t>(nodes_.size());
  nodes_.push_back({begin, end, -1, 0.0, 0, 0});
  if (end - begin <= leaf_size_) return id;

  Aabb box;
  for (uint32_t i = begin; i < end; ++i) box.expand(points_[order_[i]]);
  const Vec3 e = box.extent();
  const int axis = (e.x >= e.y && e.x >= e.z) ? 0 : (e.y >= e.z ? 1 : 2);
  if (e[axis] == 0.0) return id;  // all points coincide

  const uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end, [&](uint32_t a, uint32_t b) {
    const double pa = points_[a][axis], pb = points_[b][axis];
    return pa < pb || (pa == pb && a < b);
  });
  const double split = points_[order_[mid]][axis];
  const uint32_t left = build(begin, mid);
  const uint32_t right = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search(uint32_t node_id, const Vec3& q, Hit& best) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (uint32_t i = node.begin; i < node.end; ++i) {
      const uint32_t idx = order_[i];
      const double d = squared_distance(q, points_[idx]);
      if (d < best.squared_distance || (d == best.squared_distance && idx < best.index)) best = {idx, d};
    }
    return;
  }
  // Left holds coordinates <= split, right holds >= split.
  const double diff = q[node.axis] - node.split;
  const uint32_t near = diff < 0 ? node.left : node.right;
  const uint32_t far = diff < 0 ? node.right : node.left;
  search(near, q, best);
  if (diff * diff <= best.squared_distance) search(far, q, best);
}

KdTree::Hit KdTree::nearest(const Vec3& query) const {
  Hit best{std::numeric_limits<uint32_t>::max(), std::numeric_limits<double>::infinity()};
  search(0, query, best);
  return best;
}

}  // namespace occbench::metrics3d
