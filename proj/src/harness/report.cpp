#include <algorithm>
#include <map>
#include <set>

#include "common/csv.hpp"
#include "common/error.hpp"
#include "common/fileio.hpp"
#include "harness/harness.hpp"
#include "metrics2d/evaluate2d.hpp"
#include "metrics3d/evaluate3d.hpp"

namespace fs = std::filesystem;

namespace occbench::harness {
namespace {

struct Section {
  std::string title;
  std::vector<std::string> value_headers;  // markdown headers for the value columns
  std::vector<std::string> value_columns;  // matching aggregate CSV columns
};

void render_tables(std::string& md, const Section& section, const CsvTable& agg, const std::vector<int>& ref_views) {
  md += "## " + section.title + "\n\n";
  const int c_ds = agg.column("dataset"), c_n = agg.column("n_ref_views");
  std::vector<int> value_idx;
  for (const auto& c : section.value_columns) value_idx.push_back(agg.column(c));

  std::map<std::string, std::map<int, const std::vector<std::string>*>> by_dataset;
  for (const auto& row : agg.rows) by_dataset[row[c_ds]][std::stoi(row[c_n])] = &row;

  for (const auto& [dataset, groups] : by_dataset) {
    std::vector<int> rows = ref_views;
    for (const auto& [n, r] : groups)
      if (std::find(rows.begin(), rows.end(), n) == rows.end()) rows.push_back(n);
    std::sort(rows.begin(), rows.end());

    md += "### " + dataset + "\n\n| # Ref. Views |";
    for (const auto& h : section.value_headers) md += " " + h + " |";
    md += "\n|---|";
    for (size_t i = 0; i < section.value_headers.size(); ++i) md += "---|";
    md += "\n";
    for (int n : rows) {
      md += "| " + std::to_string(n) + " |";
      auto it = groups.find(n);
      for (int idx : value_idx) md += " " + (it == groups.end() ? std::string("-") : (*it->second)[idx]) + " |";
      md += "\n";
    }
    md += "\n";
  }
}

}  // namespace

std::string render_report(const std::vector<fs::path>& eval_dirs, const std::vector<int>& ref_views,
                          const fs::path& out_dir) {
  std::vector<metrics2d::MetricRecord> rows2d;
  std::vector<metrics3d::Record3d> rows3d;
  for (const auto& dir : eval_dirs) {
    const CsvTable t = read_csv(dir / "rows.csv");
    if (t.column("psnr_db") >= 0) {
      auto r = metrics2d::records_from_csv(t);
      rows2d.insert(rows2d.end(), r.begin(), r.end());
    } else if (t.column("chamfer") >= 0) {
      auto r = metrics3d::records3d_from_csv(t);
      rows3d.insert(rows3d.end(), r.begin(), r.end());
    } else {
      throw FormatError((dir / "rows.csv").string() + ": not an evaluation row table");
    }
  }

  std::string md = "# Evaluation summary\n\n";
  if (!rows2d.empty()) {
    const CsvTable agg = metrics2d::aggregate_csv(metrics2d::aggregate(rows2d));
    write_file_atomic(out_dir / "aggregate_2d.csv", agg.to_string());
    render_tables(md, {"Novel view synthesis", {"PSNR ↑", "SSIM ↑", "Count", "Identical"},
                       {"mean_psnr", "mean_ssim", "count", "inf_count"}},
                  agg, ref_views);
  }
  if (!rows3d.empty()) {
    const CsvTable agg = metrics3d::aggregate3d_csv(metrics3d::aggregate3d(rows3d));
    write_file_atomic(out_dir / "aggregate_3d.csv", agg.to_string());
    render_tables(md, {"3D reconstruction", {"Chamfer Dist. ↓", "Volume IoU ↑", "Count"},
                       {"mean_chamfer", "mean_volume_iou", "count"}},
                  agg, ref_views);
  }
  return md;
}

}  // namespace occbench::harness
