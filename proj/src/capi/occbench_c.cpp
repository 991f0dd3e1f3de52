#include "occbench/occbench.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "common/error.hpp"
#include "common/png_io.hpp"
#include "harness/harness.hpp"
#include "maskplan/maskplan.hpp"
#include "metrics2d/metrics2d.hpp"
#include "metrics3d/mesh.hpp"
#include "metrics3d/surface.hpp"
#include "metrics3d/voxel.hpp"
#include "poses/poses.hpp"

struct ocb_image {
  occbench::RgbaImage image;
};
struct ocb_mask {
  occbench::BinaryMask mask;
};
struct ocb_viewset {
  occbench::poses::ViewSet set;
};
struct ocb_mask_plan {
  occbench::maskplan::MaskPlan plan;
};
struct ocb_mesh {
  occbench::metrics3d::TriMesh mesh;
};

namespace {

thread_local std::string g_last_error;

ocb_status to_status(occbench::ErrorCode code) {
  switch (code) {
    case occbench::ErrorCode::InvalidArgument: return OCB_ERR_INVALID_ARGUMENT;
    case occbench::ErrorCode::Io: return OCB_ERR_IO;
    case occbench::ErrorCode::Format: return OCB_ERR_FORMAT;
    case occbench::ErrorCode::Config: return OCB_ERR_CONFIG;
    case occbench::ErrorCode::EmptyInput: return OCB_ERR_EMPTY_INPUT;
    case occbench::ErrorCode::Internal: return OCB_ERR_INTERNAL;
  }
  return OCB_ERR_INTERNAL;
}

template <class Fn>
ocb_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return OCB_OK;
  } catch (const occbench::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return OCB_ERR_FORMAT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return OCB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OCB_ERR_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw occbench::InvalidArgument(what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

occbench::poses::SphericalPose from_c(const ocb_pose& p) {
  return {p.azimuth_deg, p.elevation_deg, p.radius, p.roll_deg};
}
ocb_pose to_c(const occbench::poses::SphericalPose& p) {
  return {p.azimuth_deg, p.elevation_deg, p.radius, p.roll_deg};
}

std::vector<occbench::metrics3d::Vec3> points_from(const double* xyz, size_t count) {
  std::vector<occbench::metrics3d::Vec3> out(count);
  for (size_t i = 0; i < count; ++i) out[i] = {xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]};
  return out;
}

}  // namespace

extern "C" {

const char* ocb_version(void) { return "0.1.0"; }

const char* ocb_last_error(void) { return g_last_error.c_str(); }

const char* ocb_status_name(ocb_status status) {
  switch (status) {
    case OCB_OK: return "ok";
    case OCB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case OCB_ERR_IO: return "i/o error";
    case OCB_ERR_FORMAT: return "format error";
    case OCB_ERR_CONFIG: return "configuration error";
    case OCB_ERR_EMPTY_INPUT: return "empty input";
    case OCB_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

void ocb_string_free(char* s) { std::free(s); }

ocb_status ocb_image_create(uint32_t width, uint32_t height, const uint8_t* rgba, ocb_image** out) {
  return guarded([&] {
    require(out && rgba, "null argument");
    require(width > 0 && height > 0, "image dimensions must be > 0");
    std::vector<uint8_t> px(rgba, rgba + static_cast<size_t>(width) * height * 4);
    *out = new ocb_image{occbench::RgbaImage(static_cast<int>(width), static_cast<int>(height), std::move(px))};
  });
}

ocb_status ocb_image_load_png(const char* path, ocb_image** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new ocb_image{occbench::read_png_rgba(path)};
  });
}

ocb_status ocb_image_save_png(const ocb_image* image, const char* path) {
  return guarded([&] {
    require(image && path, "null argument");
    occbench::write_png(path, image->image);
  });
}

void ocb_image_free(ocb_image* image) { delete image; }

ocb_status ocb_image_size(const ocb_image* image, uint32_t* width, uint32_t* height) {
  return guarded([&] {
    require(image && width && height, "null argument");
    *width = static_cast<uint32_t>(image->image.width());
    *height = static_cast<uint32_t>(image->image.height());
  });
}

ocb_status ocb_image_pixels(const ocb_image* image, const uint8_t** rgba) {
  return guarded([&] {
    require(image && rgba, "null argument");
    *rgba = image->image.data().data();
  });
}

ocb_status ocb_extract_silhouette(const ocb_image* image, uint8_t alpha_threshold, ocb_mask** out) {
  return guarded([&] {
    require(image && out, "null argument");
    *out = new ocb_mask{occbench::extract_silhouette(image->image, alpha_threshold)};
  });
}

void ocb_mask_free(ocb_mask* mask) { delete mask; }

ocb_status ocb_mask_size(const ocb_mask* mask, uint32_t* width, uint32_t* height) {
  return guarded([&] {
    require(mask && width && height, "null argument");
    *width = static_cast<uint32_t>(mask->mask.width());
    *height = static_cast<uint32_t>(mask->mask.height());
  });
}

ocb_status ocb_mask_coverage(const ocb_mask* mask, double* coverage) {
  return guarded([&] {
    require(mask && coverage, "null argument");
    *coverage = mask->mask.coverage();
  });
}

ocb_status ocb_mask_get(const ocb_mask* mask, uint32_t x, uint32_t y, int* value) {
  return guarded([&] {
    require(mask && value, "null argument");
    require(x < static_cast<uint32_t>(mask->mask.width()) && y < static_cast<uint32_t>(mask->mask.height()),
            "pixel outside the mask");
    *value = mask->mask.get(static_cast<int>(x), static_cast<int>(y)) ? 1 : 0;
  });
}

ocb_status ocb_psnr(const ocb_image* a, const ocb_image* b, const uint8_t background_rgb[3], double* out_db) {
  return guarded([&] {
    require(a && b && background_rgb && out_db, "null argument");
    const occbench::Rgb bg{background_rgb[0], background_rgb[1], background_rgb[2]};
    *out_db = occbench::metrics2d::psnr(occbench::metrics2d::composite_background(a->image, bg),
                                        occbench::metrics2d::composite_background(b->image, bg));
  });
}

ocb_status ocb_ssim(const ocb_image* a, const ocb_image* b, const uint8_t background_rgb[3], double* out) {
  return guarded([&] {
    require(a && b && background_rgb && out, "null argument");
    const occbench::Rgb bg{background_rgb[0], background_rgb[1], background_rgb[2]};
    *out = occbench::metrics2d::ssim(occbench::metrics2d::composite_background(a->image, bg),
                                     occbench::metrics2d::composite_background(b->image, bg));
  });
}

ocb_status ocb_pose_to_matrix(const ocb_pose* pose, double out[16]) {
  return guarded([&] {
    require(pose && out, "null argument");
    const auto m = occbench::poses::pose_to_matrix(from_c(*pose));
    std::memcpy(out, m.m.data(), sizeof(double) * 16);
  });
}

ocb_status ocb_matrix_to_pose(const double matrix[16], ocb_pose* out) {
  return guarded([&] {
    require(matrix && out, "null argument");
    occbench::poses::CameraMatrix m;
    std::memcpy(m.m.data(), matrix, sizeof(double) * 16);
    *out = to_c(occbench::poses::matrix_to_pose(m));
  });
}

ocb_status ocb_viewset_create(const char* name, double reference_azimuth_deg, double radius, ocb_viewset** out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = new ocb_viewset{occbench::poses::make_viewset(name, reference_azimuth_deg, radius)};
  });
}

ocb_status ocb_viewset_from_json(const char* json, ocb_viewset** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = new ocb_viewset{occbench::poses::viewset_from_json(nlohmann::json::parse(json))};
  });
}

void ocb_viewset_free(ocb_viewset* set) { delete set; }

ocb_status ocb_viewset_size(const ocb_viewset* set, size_t* count) {
  return guarded([&] {
    require(set && count, "null argument");
    *count = set->set.poses.size();
  });
}

ocb_status ocb_viewset_pose(const ocb_viewset* set, size_t index, ocb_pose* out) {
  return guarded([&] {
    require(set && out, "null argument");
    require(index < set->set.poses.size(), "pose index out of range");
    *out = to_c(set->set.poses[index]);
  });
}

ocb_status ocb_viewset_to_json(const ocb_viewset* set, char** out_json) {
  return guarded([&] {
    require(set && out_json, "null argument");
    *out_json = dup_string(occbench::poses::to_json(set->set).dump(2));
  });
}

void ocb_mask_plan_default_params(ocb_mask_plan_params* params) {
  if (!params) return;
  const occbench::maskplan::PlanParams d;
  *params = {d.batch, d.views_per_sample, d.feature_len, d.p_view, d.row_ratio, d.area_ratio, d.seed, d.epoch};
}

ocb_status ocb_mask_plan_create(const ocb_mask_plan_params* params, ocb_mask_plan** out) {
  return guarded([&] {
    require(params && out, "null argument");
    occbench::maskplan::PlanParams p;
    p.batch = params->batch;
    p.views_per_sample = params->views_per_sample;
    p.feature_len = params->feature_len;
    p.p_view = params->p_view;
    p.row_ratio = params->row_ratio;
    p.area_ratio = params->area_ratio;
    p.seed = params->seed;
    p.epoch = params->epoch;
    *out = new ocb_mask_plan{occbench::maskplan::make_plan(p)};
  });
}

ocb_status ocb_mask_plan_from_json(const char* json, ocb_mask_plan** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = new ocb_mask_plan{occbench::maskplan::decode_plan(nlohmann::json::parse(json))};
  });
}

void ocb_mask_plan_free(ocb_mask_plan* plan) { delete plan; }

ocb_status ocb_mask_plan_view_masked(const ocb_mask_plan* plan, size_t row, int* value) {
  return guarded([&] {
    require(plan && value, "null argument");
    require(row < plan->plan.rows(), "row out of range");
    *value = plan->plan.view_mask[row] ? 1 : 0;
  });
}

ocb_status ocb_mask_plan_row_selected(const ocb_mask_plan* plan, size_t row, int* value) {
  return guarded([&] {
    require(plan && value, "null argument");
    require(row < plan->plan.rows(), "row out of range");
    *value = plan->plan.rows_selected[row] ? 1 : 0;
  });
}

ocb_status ocb_mask_plan_feature_masked(const ocb_mask_plan* plan, size_t row, size_t position, int* value) {
  return guarded([&] {
    require(plan && value, "null argument");
    require(row < plan->plan.rows() && position < static_cast<size_t>(plan->plan.params.feature_len),
            "position out of range");
    *value = plan->plan.feature_bit(row, position) ? 1 : 0;
  });
}

ocb_status ocb_mask_plan_to_json(const ocb_mask_plan* plan, char** out_json) {
  return guarded([&] {
    require(plan && out_json, "null argument");
    *out_json = dup_string(occbench::maskplan::plan_file_text(plan->plan));
  });
}

ocb_status ocb_mesh_load(const char* path, ocb_mesh** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new ocb_mesh{occbench::metrics3d::load_mesh(path)};
  });
}

ocb_status ocb_mesh_create(const double* vertices, size_t vertex_count, const uint32_t* faces, size_t face_count,
                           ocb_mesh** out) {
  return guarded([&] {
    require(vertices && faces && out, "null argument");
    occbench::metrics3d::TriMesh m;
    m.vertices = points_from(vertices, vertex_count);
    for (size_t f = 0; f < face_count; ++f) m.faces.push_back({faces[3 * f], faces[3 * f + 1], faces[3 * f + 2]});
    occbench::metrics3d::validate_mesh(m, "mesh");
    *out = new ocb_mesh{std::move(m)};
  });
}

void ocb_mesh_free(ocb_mesh* mesh) { delete mesh; }

ocb_status ocb_mesh_counts(const ocb_mesh* mesh, size_t* vertices, size_t* faces) {
  return guarded([&] {
    require(mesh && vertices && faces, "null argument");
    *vertices = mesh->mesh.vertices.size();
    *faces = mesh->mesh.faces.size();
  });
}

ocb_status ocb_mesh_normalize(const ocb_mesh* mesh, ocb_mesh** out) {
  return guarded([&] {
    require(mesh && out, "null argument");
    *out = new ocb_mesh{occbench::metrics3d::normalize_mesh(mesh->mesh)};
  });
}

ocb_status ocb_mesh_is_watertight(const ocb_mesh* mesh, int* watertight) {
  return guarded([&] {
    require(mesh && watertight, "null argument");
    *watertight = occbench::metrics3d::is_watertight(mesh->mesh) ? 1 : 0;
  });
}

ocb_status ocb_chamfer(const ocb_mesh* a, const ocb_mesh* b, size_t n_points, uint64_t seed, int squared,
                       double* out) {
  return guarded([&] {
    require(a && b && out, "null argument");
    require(n_points > 0, "point count must be > 0");
    const occbench::RngKey key(seed);
    const auto pa = occbench::metrics3d::sample_surface(a->mesh, n_points, key);
    const auto pb = occbench::metrics3d::sample_surface(b->mesh, n_points, key);
    *out = occbench::metrics3d::chamfer(pa, pb, {squared != 0, 1});
  });
}

ocb_status ocb_chamfer_points(const double* a, size_t a_count, const double* b, size_t b_count, int squared,
                              double* out) {
  return guarded([&] {
    require(a && b && out, "null argument");
    *out = occbench::metrics3d::chamfer(points_from(a, a_count), points_from(b, b_count), {squared != 0, 1});
  });
}

ocb_status ocb_volume_iou(const ocb_mesh* a, const ocb_mesh* b, int resolution, double* out) {
  return guarded([&] {
    require(a && b && out, "null argument");
    *out = occbench::metrics3d::volume_iou(a->mesh, b->mesh, resolution);
  });
}

ocb_status ocb_run(const char* config_json, const char* run_root, int* exit_code, char** summary) {
  if (exit_code) *exit_code = occbench::harness::kExitHardError;
  if (summary) *summary = nullptr;
  return guarded([&] {
    require(config_json && exit_code, "null argument");
    const auto config = occbench::harness::config_from_json(nlohmann::json::parse(config_json));
    const auto outcome = occbench::harness::run(config, run_root ? run_root : "");
    *exit_code = outcome.exit_code;
    if (summary) *summary = dup_string(outcome.summary);
  });
}

}  // extern "C"
