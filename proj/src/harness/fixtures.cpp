#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>

#include <json.hpp>

#include "common/fileio.hpp"
#include "common/png_io.hpp"
#include "common/rng.hpp"
#include "harness/harness.hpp"
#include "metrics3d/mesh.hpp"
#include "poses/poses.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace occbench::harness {
namespace {

constexpr int kSize = 256;

using Shape = std::function<bool(double x, double y)>;

// Colour varies smoothly with position so metrics see structure.
RgbaImage draw(const Shape& inside, Rgb base) {
  RgbaImage img(kSize, kSize);
  for (int y = 0; y < kSize; ++y)
    for (int x = 0; x < kSize; ++x) {
      if (!inside(x + 0.5, y + 0.5)) continue;
      uint8_t* p = img.at(x, y);
      p[0] = static_cast<uint8_t>((base[0] + x / 2) % 256);
      p[1] = static_cast<uint8_t>((base[1] + y / 2) % 256);
      p[2] = static_cast<uint8_t>((base[2] + (x + y) / 4) % 256);
      p[3] = 255;
    }
  return img;
}

Shape disk(double cx, double cy, double r) {
  return [=](double x, double y) { return (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r; };
}
Shape rect(double x0, double y0, double x1, double y1) {
  return [=](double x, double y) { return x >= x0 && x <= x1 && y >= y0 && y <= y1; };
}
Shape ring(double cx, double cy, double r0, double r1) {
  return [=](double x, double y) {
    const double d = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    return d >= r0 * r0 && d <= r1 * r1;
  };
}
Shape triangle(double cx, double cy, double s) {
  return [=](double x, double y) {
    const double u = (y - (cy - s)) / (2 * s);
    return u >= 0 && u <= 1 && std::abs(x - cx) <= u * s;
  };
}
Shape cross_shape(double cx, double cy, double arm, double w) {
  return [=](double x, double y) {
    return (std::abs(x - cx) <= w && std::abs(y - cy) <= arm) || (std::abs(y - cy) <= w && std::abs(x - cx) <= arm);
  };
}

void add_noise(RgbaImage& img, int amplitude, RngKey key) {
  Rng rng(key);
  for (auto& v : img.data()) {
    const int d = static_cast<int>(rng.between(-amplitude, amplitude));
    v = static_cast<uint8_t>(std::clamp(static_cast<int>(v) + d, 0, 255));
  }
}

void write_ply_ascii(const fs::path& path, const metrics3d::TriMesh& m) {
  std::string s = "ply\nformat ascii 1.0\nelement vertex " + std::to_string(m.vertices.size()) +
                  "\nproperty float x\nproperty float y\nproperty float z\nelement face " +
                  std::to_string(m.faces.size()) + "\nproperty list uchar int vertex_indices\nend_header\n";
  char buf[128];
  for (const auto& v : m.vertices) {
    std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g\n", v.x, v.y, v.z);
    s += buf;
  }
  for (const auto& f : m.faces) s += "3 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " + std::to_string(f[2]) + "\n";
  write_file_atomic(path, s);
}

void write_ply_binary(const fs::path& path, const metrics3d::TriMesh& m) {
  std::string header = "ply\nformat binary_little_endian 1.0\ncomment fixture\nelement vertex " +
                       std::to_string(m.vertices.size()) +
                       "\nproperty double x\nproperty double y\nproperty double z\nproperty uchar red\nelement face " +
                       std::to_string(m.faces.size()) + "\nproperty list uchar uint vertex_indices\nend_header\n";
  std::vector<uint8_t> bytes(header.begin(), header.end());
  auto put = [&](const void* p, size_t n) {
    auto* b = static_cast<const uint8_t*>(p);
    bytes.insert(bytes.end(), b, b + n);
  };
  for (const auto& v : m.vertices) {
    put(&v.x, 8);
    put(&v.y, 8);
    put(&v.z, 8);
    const uint8_t red = 200;
    put(&red, 1);
  }
  for (const auto& f : m.faces) {
    const uint8_t n = 3;
    put(&n, 1);
    for (uint32_t i : f) put(&i, 4);
  }
  write_file_atomic(path, bytes);
}

}  // namespace

void write_fixtures(const fs::path& dir) {
  // Occluder renders.
  const std::vector<std::pair<std::string, RgbaImage>> renders = {
      {"disk", draw(disk(128, 128, 70), {200, 40, 40})},
      {"square", draw(rect(70, 80, 190, 170), {40, 200, 40})},
      {"ring", draw(ring(128, 128, 30, 80), {40, 40, 200})},
      {"triangle", draw(triangle(128, 128, 90), {220, 180, 30})},
      {"cross", draw(cross_shape(128, 128, 90, 22), {30, 190, 190})},
      {"empty", RgbaImage(kSize, kSize)},
  };
  for (const auto& [name, img] : renders) write_png(dir / "renders" / (name + ".png"), img);

  // Clean views: 4 objects x 4 views, views 0-1 are references.
  ordered_json views = ordered_json::array();
  const auto poses = poses::viewset_neus36(1.5).poses;
  for (int obj = 0; obj < 4; ++obj)
    for (int v = 0; v < 4; ++v) {
      const double r = 50 + 8 * obj + 4 * v;
      const RgbaImage img = (obj % 2 == 0)
                                ? draw(disk(118 + 6 * v, 128 + 3 * obj, r), {static_cast<uint8_t>(60 * obj), 120, 90})
                                : draw(rect(128 - r, 128 - 0.8 * r + 4 * v, 128 + r, 128 + 0.8 * r), {90, static_cast<uint8_t>(50 * obj), 160});
      char name[64];
      std::snprintf(name, sizeof name, "views/obj%d_%03d.png", obj, v);
      write_png(dir / name, img);
      ordered_json row;
      row["object_id"] = "obj" + std::to_string(obj);
      row["view_index"] = v;
      row["clean_path"] = name;
      row["pose"] = poses::to_json(poses[static_cast<size_t>(obj * 4 + v)]);
      row["role"] = v < 2 ? "reference" : "target";
      views.push_back(std::move(row));
    }
  write_file_atomic(dir / "views.json", views.dump(2) + "\n");

  // 2D evaluation: ground truth plus predictions whose noise shrinks with more references.
  ordered_json gt2d = ordered_json::array();
  for (int obj = 0; obj < 2; ++obj)
    for (int nref : {1, 3})
      for (int v = 2; v < 4; ++v) {
        char gt_name[64];
        std::snprintf(gt_name, sizeof gt_name, "views/obj%d_%03d.png", obj, v);
        RgbaImage pred = read_png_rgba(dir / gt_name);
        const int amplitude = (obj == 0 && nref == 3 && v == 2) ? 0 : 24 / nref;
        if (amplitude) add_noise(pred, amplitude, RngKey(1234).derive(static_cast<uint64_t>(obj * 100 + nref * 10 + v)));
        char pred_name[96];
        std::snprintf(pred_name, sizeof pred_name, "pred2d/fixture/obj%d/nref_%d/%03d.png", obj, nref, v);
        write_png(dir / pred_name, pred);
        ordered_json row;
        row["dataset"] = "fixture";
        row["object_id"] = "obj" + std::to_string(obj);
        row["view_index"] = v;
        row["n_ref_views"] = nref;
        row["gt_path"] = gt_name;
        row["role"] = "target";
        gt2d.push_back(std::move(row));
      }
  write_file_atomic(dir / "gt2d.json", gt2d.dump(2) + "\n");

  // 3D evaluation meshes.
  using metrics3d::make_box;
  using metrics3d::make_icosphere;
  metrics3d::write_obj(dir / "gt3d" / "cube.obj", make_box({0, 0, 0}, {1, 1, 1}));
  metrics3d::write_obj(dir / "pred3d" / "cube.obj", make_box({2, 2, 2}, {4, 4, 3.8}));
  metrics3d::write_obj(dir / "gt3d" / "sphere.obj", make_icosphere({0, 0, 0}, 1.0, 3));
  write_ply_ascii(dir / "pred3d" / "sphere.ply", make_icosphere({0.1, 0, 0}, 0.9, 2));
  write_ply_binary(dir / "gt3d" / "slab.ply", make_box({-1, -0.5, -0.25}, {1, 0.5, 0.25}));
  write_ply_binary(dir / "pred3d" / "slab.ply", make_box({-1, -0.5, -0.2}, {1, 0.45, 0.25}));
}

}  // namespace occbench::harness
