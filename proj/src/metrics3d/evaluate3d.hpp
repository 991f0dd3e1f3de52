#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "common/csv.hpp"

namespace occbench::metrics3d {

struct Eval3dOptions {
  double pre_rotation_deg = 0.0;  // about +z, applied to predictions before normalization
  size_t n_points = 100000;
  int resolution = 64;
  bool squared = false;
  uint64_t seed = 0;
  std::string dataset = "default";
  int n_ref_views = 1;
  int workers = 1;
};

struct Record3d {
  std::string dataset;
  std::string object_id;
  int n_ref_views = 0;
  double chamfer = 0.0;
  double volume_iou = 0.0;
  bool watertight_pred = false;
  std::string status;  // ok | missing_pred | missing_gt | load_failed | degenerate | empty_volume
};

struct Aggregate3d {
  std::string dataset;
  int n_ref_views = 0;
  double mean_chamfer = 0.0;
  double mean_volume_iou = 0.0;
  size_t count = 0;
};

struct Eval3dResult {
  std::vector<Record3d> records;  // sorted by object_id
  std::vector<Aggregate3d> groups;
  size_t flagged = 0;
};

/// Scores one mesh pair after the optional pre-rotation and normalization of
/// both. Both meshes are sampled with the same key.
Record3d evaluate_pair(const std::filesystem::path& pred, const std::filesystem::path& gt, const std::string& object_id,
                       const Eval3dOptions& options);

/// Pairs <pred_dir>/<id>.{obj,ply} with <gt_dir>/<id>.{obj,ply}. Missing or
/// unreadable meshes become flagged rows.
Eval3dResult evaluate_3d(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                         const Eval3dOptions& options);

std::vector<Aggregate3d> aggregate3d(const std::vector<Record3d>& records);

CsvTable records3d_csv(const std::vector<Record3d>& records);
std::vector<Record3d> records3d_from_csv(const CsvTable& table);
CsvTable aggregate3d_csv(const std::vector<Aggregate3d>& groups);

}  // namespace occbench::metrics3d
