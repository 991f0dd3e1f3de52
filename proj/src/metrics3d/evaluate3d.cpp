#include "metrics3d/evaluate3d.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "common/error.hpp"
#include "common/fileio.hpp"
#include "common/format.hpp"
#include "common/parallel.hpp"
#include "common/rng.hpp"
#include "metrics3d/mesh.hpp"
#include "metrics3d/surface.hpp"
#include "metrics3d/voxel.hpp"

namespace fs = std::filesystem;

namespace occbench::metrics3d {
namespace {

std::map<std::string, fs::path> meshes_by_stem(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  for (const auto& p : list_files(dir, {".obj", ".ply"})) out.emplace(p.stem().string(), p);
  return out;
}

}  // namespace

Record3d evaluate_pair(const fs::path& pred_path, const fs::path& gt_path, const std::string& object_id,
                       const Eval3dOptions& options) {
  Record3d rec;
  rec.dataset = options.dataset;
  rec.object_id = object_id;
  rec.n_ref_views = options.n_ref_views;
  TriMesh pred, gt;
  try {
    pred = load_mesh(pred_path);
    gt = load_mesh(gt_path);
  } catch (const Error&) {
    rec.status = "load_failed";
    return rec;
  }
  rec.watertight_pred = is_watertight(pred);
  try {
    if (options.pre_rotation_deg != 0.0) pred = rotate_z(pred, options.pre_rotation_deg);
    pred = normalize_mesh(pred);
    gt = normalize_mesh(gt);
  } catch (const InvalidArgument&) {
    rec.status = "degenerate";
    return rec;
  }
  // Shared key: identical meshes give identical samples.
  const RngKey key = RngKey(options.seed).derive("surface").derive(object_id);
  const PointSample ps = sample_surface(pred, options.n_points, key);
  const PointSample gs = sample_surface(gt, options.n_points, key);
  rec.chamfer = chamfer(ps, gs, {options.squared, 1});
  try {
    rec.volume_iou = volume_iou(pred, gt, options.resolution, 1);
  } catch (const EmptyInputError&) {
    rec.status = "empty_volume";
    return rec;
  }
  rec.status = "ok";
  return rec;
}

Eval3dResult evaluate_3d(const fs::path& pred_dir, const fs::path& gt_dir, const Eval3dOptions& options) {
  if (options.n_points == 0) throw ConfigError("point count must be > 0");
  if (options.resolution < 1) throw ConfigError("resolution must be >= 1");
  const auto preds = meshes_by_stem(pred_dir);
  const auto gts = meshes_by_stem(gt_dir);
  if (gts.empty()) throw EmptyInputError("no ground-truth meshes in " + gt_dir.string());

  std::vector<std::string> ids;
  for (const auto& [id, p] : gts) ids.push_back(id);
  for (const auto& [id, p] : preds)
    if (!gts.count(id)) ids.push_back(id);
  std::sort(ids.begin(), ids.end());

  Eval3dResult result;
  result.records.resize(ids.size());
  parallel_for(ids.size(), options.workers, [&](size_t i) {
    const std::string& id = ids[i];
    auto p = preds.find(id);
    auto g = gts.find(id);
    if (p == preds.end() || g == gts.end()) {
      Record3d& r = result.records[i];
      r.dataset = options.dataset;
      r.object_id = id;
      r.n_ref_views = options.n_ref_views;
      r.status = p == preds.end() ? "missing_pred" : "missing_gt";
      return;
    }
    result.records[i] = evaluate_pair(p->second, g->second, id, options);
  });
  for (const auto& r : result.records) result.flagged += r.status == "ok" ? 0 : 1;
  result.groups = aggregate3d(result.records);
  return result;
}

std::vector<Aggregate3d> aggregate3d(const std::vector<Record3d>& records) {
  std::vector<const Record3d*> sorted;
  for (const auto& r : records)
    if (r.status == "ok") sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) {
    return std::tie(a->dataset, a->n_ref_views, a->object_id) < std::tie(b->dataset, b->n_ref_views, b->object_id);
  });
  std::vector<Aggregate3d> out;
  size_t i = 0;
  while (i < sorted.size()) {
    Aggregate3d g;
    g.dataset = sorted[i]->dataset;
    g.n_ref_views = sorted[i]->n_ref_views;
    double cd = 0.0, iou = 0.0;
    for (; i < sorted.size() && sorted[i]->dataset == g.dataset && sorted[i]->n_ref_views == g.n_ref_views; ++i) {
      cd += sorted[i]->chamfer;
      iou += sorted[i]->volume_iou;
      ++g.count;
    }
    g.mean_chamfer = cd / static_cast<double>(g.count);
    g.mean_volume_iou = iou / static_cast<double>(g.count);
    out.push_back(std::move(g));
  }
  return out;
}

CsvTable records3d_csv(const std::vector<Record3d>& records) {
  CsvTable t;
  t.header = {"dataset", "object_id", "n_ref_views", "chamfer", "volume_iou", "watertight_pred", "status"};
  for (const auto& r : records) {
    const bool ok = r.status == "ok";
    const bool loaded = ok || r.status == "degenerate" || r.status == "empty_volume";
    t.rows.push_back({r.dataset, r.object_id, std::to_string(r.n_ref_views), ok ? format_double(r.chamfer) : "",
                      ok ? format_double(r.volume_iou) : "", loaded ? (r.watertight_pred ? "true" : "false") : "",
                      r.status});
  }
  return t;
}

std::vector<Record3d> records3d_from_csv(const CsvTable& table) {
  const char* required[] = {"dataset", "object_id", "n_ref_views", "chamfer", "volume_iou", "watertight_pred",
                            "status"};
  int cols[7];
  for (int i = 0; i < 7; ++i) {
    cols[i] = table.column(required[i]);
    if (cols[i] < 0) throw FormatError(std::string("row CSV lacks column ") + required[i]);
  }
  std::vector<Record3d> out;
  for (const auto& row : table.rows) {
    Record3d r;
    r.dataset = row[cols[0]];
    r.object_id = row[cols[1]];
    try {
      r.n_ref_views = std::stoi(row[cols[2]]);
    } catch (const std::exception&) {
      throw FormatError("bad n_ref_views for " + r.object_id);
    }
    r.watertight_pred = row[cols[5]] == "true";
    r.status = row[cols[6]];
    if (r.status == "ok" && (!parse_double(row[cols[3]], r.chamfer) || !parse_double(row[cols[4]], r.volume_iou)))
      throw FormatError("bad metric value in row for " + r.object_id);
    out.push_back(std::move(r));
  }
  return out;
}

CsvTable aggregate3d_csv(const std::vector<Aggregate3d>& groups) {
  CsvTable t;
  t.header = {"dataset", "n_ref_views", "mean_chamfer", "mean_volume_iou", "count"};
  for (const auto& g : groups)
    t.rows.push_back({g.dataset, std::to_string(g.n_ref_views), format_double(g.mean_chamfer),
                      format_double(g.mean_volume_iou), std::to_string(g.count)});
  return t;
}

}  // namespace occbench::metrics3d
