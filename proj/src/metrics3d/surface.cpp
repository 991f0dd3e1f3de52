#include "metrics3d/surface.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "metrics3d/kdtree.hpp"

namespace occbench::metrics3d {

PointSample sample_surface(const TriMesh& mesh, size_t n, RngKey key, std::vector<uint32_t>* face_out) {
  std::vector<double> cdf(mesh.faces.size());
  double total = 0.0;
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    total += mesh.triangle_area(f);
    cdf[f] = total;
  }
  if (!(total > 0.0)) throw InvalidArgument("cannot sample a mesh with zero surface area");

  PointSample out;
  out.source_area = total;
  out.points.reserve(n);
  if (face_out) face_out->assign(n, 0);
  Rng rng(key);
  for (size_t i = 0; i < n; ++i) {
    const double u = rng.uniform01() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    size_t f = std::min(static_cast<size_t>(it - cdf.begin()), cdf.size() - 1);
    // skip zero-area faces that share the same cumulative value
    while (f + 1 < cdf.size() && mesh.triangle_area(f) == 0.0) ++f;
    const auto& t = mesh.faces[f];
    const double s = std::sqrt(rng.uniform01());
    const double r = rng.uniform01();
    const Vec3 a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
    out.points.push_back(a * (1.0 - s) + b * (s * (1.0 - r)) + c * (s * r));
    if (face_out) (*face_out)[i] = static_cast<uint32_t>(f);
  }
  return out;
}

std::vector<double> nearest_distances(const std::vector<Vec3>& queries, const std::vector<Vec3>& reference,
                                      int workers) {
  const KdTree tree(reference);
  std::vector<double> out(queries.size());
  const size_t chunk = 4096;
  const size_t chunks = (queries.size() + chunk - 1) / chunk;
  parallel_for(chunks, workers, [&](size_t c) {
    const size_t end = std::min(queries.size(), (c + 1) * chunk);
    for (size_t i = c * chunk; i < end; ++i) out[i] = std::sqrt(tree.nearest(queries[i]).squared_distance);
  });
  return out;
}

double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b, const ChamferOptions& options) {
  if (a.empty() || b.empty()) throw InvalidArgument("chamfer distance of an empty point set");
  auto directed = [&](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    const auto d = nearest_distances(from, to, options.workers);
    double sum = 0.0;
    for (double v : d) sum += options.squared ? v * v : v;
    return sum / static_cast<double>(d.size());
  };
  return 0.5 * (directed(a, b) + directed(b, a));
}

}  // namespace occbench::metrics3d
