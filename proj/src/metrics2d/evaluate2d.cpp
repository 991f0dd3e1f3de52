#include "metrics2d/evaluate2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include <json.hpp>

#include "common/error.hpp"
#include "common/fileio.hpp"
#include "common/format.hpp"
#include "common/parallel.hpp"
#include "common/png_io.hpp"

namespace fs = std::filesystem;

namespace occbench::metrics2d {
namespace {

using RowKey = std::tuple<std::string, int, std::string, int>;

RowKey key_of(const MetricRecord& r) { return {r.dataset, r.n_ref_views, r.object_id, r.view_index}; }

bool selected(const GtRow& row, EvalMode mode) {
  if (mode == EvalMode::Nvs) return row.role != "reference";
  return row.role != "target";
}

int parse_int(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw FormatError(std::string("bad ") + what + " '" + s + "'");
}

}  // namespace

std::vector<GtRow> read_gt_manifest(const fs::path& manifest) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file_text(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(manifest.string() + ": " + e.what());
  }
  if (!j.is_array()) throw FormatError(manifest.string() + ": manifest must be a JSON array");
  std::vector<GtRow> rows;
  for (size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    GtRow r;
    try {
      r.dataset = e.value("dataset", "default");
      r.object_id = e.at("object_id").get<std::string>();
      r.view_index = e.at("view_index").get<int>();
      r.n_ref_views = e.value("n_ref_views", 1);
      fs::path gt(e.at("gt_path").get<std::string>());
      r.gt_path = gt.is_absolute() ? gt : manifest.parent_path() / gt;
      r.pred_path = e.value("pred_path", "");
      r.role = e.value("role", "");
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError(manifest.string() + " row " + std::to_string(i) + ": " + ex.what());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string default_prediction_path(const GtRow& row) {
  char view[16];
  std::snprintf(view, sizeof view, "%03d", row.view_index);
  return row.dataset + "/" + row.object_id + "/nref_" + std::to_string(row.n_ref_views) + "/" + view + ".png";
}

std::vector<AggregateRow> aggregate(const std::vector<MetricRecord>& records) {
  std::vector<const MetricRecord*> sorted;
  for (const auto& r : records)
    if (r.status == "ok") sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return key_of(*a) < key_of(*b); });

  std::vector<AggregateRow> out;
  size_t i = 0;
  while (i < sorted.size()) {
    AggregateRow g;
    g.dataset = sorted[i]->dataset;
    g.n_ref_views = sorted[i]->n_ref_views;
    double psnr_sum = 0.0, ssim_sum = 0.0;
    size_t finite = 0;
    for (; i < sorted.size() && sorted[i]->dataset == g.dataset && sorted[i]->n_ref_views == g.n_ref_views; ++i) {
      const auto& r = *sorted[i];
      ++g.count;
      ssim_sum += r.ssim;
      if (std::isinf(r.psnr_db)) {
        ++g.inf_count;
      } else {
        psnr_sum += r.psnr_db;
        ++finite;
      }
    }
    g.mean_ssim = ssim_sum / static_cast<double>(g.count);
    g.mean_psnr = finite ? psnr_sum / static_cast<double>(finite) : kPsnrIdentical;
    out.push_back(std::move(g));
  }
  return out;
}

Eval2dResult evaluate_2d(const fs::path& pred_dir, const std::vector<GtRow>& gt, const Eval2dOptions& options) {
  std::vector<const GtRow*> rows;
  for (const auto& r : gt)
    if (selected(r, options.mode)) rows.push_back(&r);

  std::vector<fs::path> pred_paths(rows.size());
  size_t present = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = *rows[i];
    pred_paths[i] = pred_dir / (r.pred_path.empty() ? default_prediction_path(r) : r.pred_path);
    if (fs::exists(pred_paths[i])) {
      ++present;
    } else if (options.missing == MissingPolicy::Error) {
      throw ConfigError("missing prediction " + pred_paths[i].string());
    }
  }
  if (present == 0) throw EmptyInputError("no evaluable pairs");

  Eval2dResult result;
  result.records.resize(rows.size());
  parallel_for(rows.size(), options.workers, [&](size_t i) {
    const GtRow& g = *rows[i];
    MetricRecord& rec = result.records[i];
    rec.dataset = g.dataset;
    rec.object_id = g.object_id;
    rec.view_index = g.view_index;
    rec.n_ref_views = g.n_ref_views;
    if (!fs::exists(pred_paths[i])) {
      rec.status = "missing";
      return;
    }
    RgbImage pred, truth;
    try {
      pred = composite_background(read_png_rgba(pred_paths[i]), options.background);
      truth = composite_background(read_png_rgba(g.gt_path), options.background);
    } catch (const Error&) {
      rec.status = "read_failed";
      return;
    }
    if (pred.width() != truth.width() || pred.height() != truth.height()) {
      rec.status = "size_mismatch";
      return;
    }
    try {
      rec.psnr_db = psnr(pred, truth);
      rec.ssim = ssim(pred, truth);
      rec.status = "ok";
    } catch (const InvalidArgument&) {
      rec.status = "size_mismatch";
    }
  });

  if (options.import_scores) {
    const CsvTable scores = read_csv(*options.import_scores);
    const int c_ds = scores.column("dataset"), c_obj = scores.column("object_id"), c_view = scores.column("view_index"),
              c_ref = scores.column("n_ref_views");
    if (c_obj < 0 || c_view < 0 || c_ref < 0)
      throw FormatError("imported scores need object_id, view_index and n_ref_views columns");
    std::vector<int> value_cols;
    for (int c = 0; c < static_cast<int>(scores.header.size()); ++c)
      if (c != c_ds && c != c_obj && c != c_view && c != c_ref) {
        value_cols.push_back(c);
        result.extra_columns.push_back(scores.header[c]);
      }
    std::map<RowKey, const std::vector<std::string>*> by_key;
    for (const auto& row : scores.rows)
      by_key[{c_ds >= 0 ? row[c_ds] : "default", parse_int(row[c_ref], "n_ref_views"), row[c_obj],
              parse_int(row[c_view], "view_index")}] = &row;
    for (auto& rec : result.records) {
      auto it = by_key.find(key_of(rec));
      for (int c : value_cols) rec.extra[scores.header[c]] = it == by_key.end() ? "" : (*it->second)[c];
    }
  }

  std::sort(result.records.begin(), result.records.end(),
            [](const MetricRecord& a, const MetricRecord& b) { return key_of(a) < key_of(b); });
  for (const auto& r : result.records) result.flagged += r.status == "ok" ? 0 : 1;
  result.groups = aggregate(result.records);
  return result;
}

CsvTable records_csv(const std::vector<MetricRecord>& records, const std::vector<std::string>& extra_columns) {
  CsvTable t;
  t.header = {"dataset", "object_id", "view_index", "n_ref_views", "psnr_db", "ssim", "status"};
  t.header.insert(t.header.end(), extra_columns.begin(), extra_columns.end());
  for (const auto& r : records) {
    const bool ok = r.status == "ok";
    std::vector<std::string> row{r.dataset,
                                 r.object_id,
                                 std::to_string(r.view_index),
                                 std::to_string(r.n_ref_views),
                                 ok ? format_double(r.psnr_db) : "",
                                 ok ? format_double(r.ssim) : "",
                                 r.status};
    for (const auto& c : extra_columns) {
      auto it = r.extra.find(c);
      row.push_back(it == r.extra.end() ? "" : it->second);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<MetricRecord> records_from_csv(const CsvTable& table) {
  const char* required[] = {"dataset", "object_id", "view_index", "n_ref_views", "psnr_db", "ssim", "status"};
  int cols[7];
  for (int i = 0; i < 7; ++i) {
    cols[i] = table.column(required[i]);
    if (cols[i] < 0) throw FormatError(std::string("row CSV lacks column ") + required[i]);
  }
  std::vector<MetricRecord> out;
  for (const auto& row : table.rows) {
    MetricRecord r;
    r.dataset = row[cols[0]];
    r.object_id = row[cols[1]];
    r.view_index = parse_int(row[cols[2]], "view_index");
    r.n_ref_views = parse_int(row[cols[3]], "n_ref_views");
    r.status = row[cols[6]];
    if (r.status == "ok" &&
        (!parse_double(row[cols[4]], r.psnr_db) || !parse_double(row[cols[5]], r.ssim)))
      throw FormatError("bad metric value in row for " + r.object_id);
    out.push_back(std::move(r));
  }
  return out;
}

CsvTable aggregate_csv(const std::vector<AggregateRow>& groups) {
  CsvTable t;
  t.header = {"dataset", "n_ref_views", "mean_psnr", "mean_ssim", "count", "inf_count"};
  for (const auto& g : groups)
    t.rows.push_back({g.dataset, std::to_string(g.n_ref_views), format_double(g.mean_psnr), format_double(g.mean_ssim),
                      std::to_string(g.count), std::to_string(g.inf_count)});
  return t;
}

}  // namespace occbench::metrics2d
