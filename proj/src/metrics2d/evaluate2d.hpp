#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "common/csv.hpp"
#include "common/image.hpp"
#include "metrics2d/metrics2d.hpp"

namespace occbench::metrics2d {

/// One ground-truth row. Predictions default to
/// <pred_dir>/<dataset>/<object_id>/nref_<n>/<view_index:03d>.png unless the
/// manifest gives pred_path.
struct GtRow {
  std::string dataset;
  std::string object_id;
  int view_index = 0;
  int n_ref_views = 1;
  std::filesystem::path gt_path;
  std::string pred_path;  // relative to the prediction directory, optional
  std::string role;       // "reference", "target" or empty
};

std::vector<GtRow> read_gt_manifest(const std::filesystem::path& manifest);
std::string default_prediction_path(const GtRow& row);

struct MetricRecord {
  std::string dataset;
  std::string object_id;
  int view_index = 0;
  int n_ref_views = 0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::string status;  // ok | missing | read_failed | size_mismatch
  std::map<std::string, std::string> extra;
};

struct AggregateRow {
  std::string dataset;
  int n_ref_views = 0;
  double mean_psnr = 0.0;  // over finite PSNR values; inf when every row was identical
  double mean_ssim = 0.0;
  size_t count = 0;      // rows with status ok
  size_t inf_count = 0;  // of those, rows with identical images
};

/// Group means per (dataset, n_ref_views), reduced in sorted key order so the
/// result does not depend on row order.
std::vector<AggregateRow> aggregate(const std::vector<MetricRecord>& records);

enum class EvalMode { Nvs, Amodal };
enum class MissingPolicy { Error, Skip };

struct Eval2dOptions {
  EvalMode mode = EvalMode::Nvs;
  Rgb background{255, 255, 255};
  MissingPolicy missing = MissingPolicy::Skip;
  std::optional<std::filesystem::path> import_scores;
  int workers = 1;
};

struct Eval2dResult {
  std::vector<MetricRecord> records;  // sorted by (dataset, n_ref_views, object_id, view_index)
  std::vector<AggregateRow> groups;
  std::vector<std::string> extra_columns;
  size_t flagged = 0;
};

/// NVS mode scores rows not marked "reference"; amodal mode scores rows not
/// marked "target" (predictions at the input viewpoints). Throws
/// EmptyInputError("no evaluable pairs") when nothing can be compared.
Eval2dResult evaluate_2d(const std::filesystem::path& pred_dir, const std::vector<GtRow>& gt,
                         const Eval2dOptions& options);

/// Per-row table with columns dataset,object_id,view_index,n_ref_views,
/// psnr_db,ssim,status followed by any imported columns.
CsvTable records_csv(const std::vector<MetricRecord>& records, const std::vector<std::string>& extra_columns = {});
std::vector<MetricRecord> records_from_csv(const CsvTable& table);
CsvTable aggregate_csv(const std::vector<AggregateRow>& groups);

}  // namespace occbench::metrics2d
