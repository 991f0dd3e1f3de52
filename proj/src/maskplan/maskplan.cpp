#include "maskplan/maskplan.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "common/base64.hpp"
#include "common/error.hpp"
#include "common/fileio.hpp"
#include "common/format.hpp"

namespace occbench::maskplan {
namespace {

void check_ratio(double r, const char* name) {
  if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
}

// First k entries of a partial Fisher-Yates shuffle of [0, n).
std::vector<size_t> choose_without_replacement(size_t n, size_t k, Rng& rng) {
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  for (size_t i = 0; i < k; ++i) {
    size_t j = i + static_cast<size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

RngKey plan_key(const PlanParams& p) { return RngKey(p.seed).derive(p.epoch); }

}  // namespace

void PlanParams::validate() const {
  if (batch < 1 || views_per_sample < 1 || feature_len < 1)
    throw InvalidArgument("B, T and L must all be >= 1");
  check_ratio(p_view, "p_view");
  check_ratio(row_ratio, "row_ratio");
  check_ratio(area_ratio, "area_ratio");
}

std::vector<bool> sample_input_mask(int views, double p_view, RngKey key) {
  if (views < 1) throw InvalidArgument("view count must be >= 1");
  check_ratio(p_view, "p_view");
  Rng rng(key);
  std::vector<bool> out(static_cast<size_t>(views));
  for (size_t i = 0; i < out.size(); ++i) out[i] = rng.bernoulli(p_view);
  return out;
}

FeatureMask sample_feature_mask(int batch, int views, int feature_len, double row_ratio, double area_ratio,
                                RngKey key) {
  if (batch < 1 || views < 1 || feature_len < 1) throw InvalidArgument("B, T and L must all be >= 1");
  check_ratio(row_ratio, "row_ratio");
  check_ratio(area_ratio, "area_ratio");

  const size_t rows = static_cast<size_t>(batch) * views;
  const size_t len = static_cast<size_t>(feature_len);
  const auto n_rows = static_cast<size_t>(round_half_up(row_ratio * static_cast<double>(rows)));
  const auto n_pos = static_cast<size_t>(round_half_up(area_ratio * static_cast<double>(len)));

  FeatureMask out{std::vector<bool>(rows, false), std::vector<bool>(rows * len, false)};
  Rng row_rng(key.derive("rows"));
  for (size_t r : choose_without_replacement(rows, n_rows, row_rng)) {
    out.rows_selected[r] = true;
    Rng pos_rng(key.derive("positions").derive(static_cast<uint64_t>(r)));
    for (size_t p : choose_without_replacement(len, n_pos, pos_rng)) out.mask[r * len + p] = true;
  }
  return out;
}

MaskPlan make_plan(const PlanParams& params) {
  params.validate();
  MaskPlan plan;
  plan.params = params;
  const RngKey key = plan_key(params);
  const RngKey view_key = key.derive("view");
  plan.view_mask.reserve(static_cast<size_t>(params.batch) * params.views_per_sample);
  for (int b = 0; b < params.batch; ++b) {
    auto v = sample_input_mask(params.views_per_sample, params.p_view, view_key.derive(static_cast<uint64_t>(b)));
    plan.view_mask.insert(plan.view_mask.end(), v.begin(), v.end());
  }
  auto feature = sample_feature_mask(params.batch, params.views_per_sample, params.feature_len, params.row_ratio,
                                     params.area_ratio, key.derive("feature"));
  plan.rows_selected = std::move(feature.rows_selected);
  plan.feature_mask = std::move(feature.mask);
  return plan;
}

nlohmann::ordered_json encode_plan(const MaskPlan& plan) {
  const auto& p = plan.params;
  nlohmann::ordered_json j;
  j["version"] = kPlanVersion;
  j["B"] = p.batch;
  j["T"] = p.views_per_sample;
  j["L"] = p.feature_len;
  j["p_view"] = p.p_view;
  j["row_ratio"] = p.row_ratio;
  j["area_ratio"] = p.area_ratio;
  j["seed"] = p.seed;
  j["epoch"] = p.epoch;
  j["view_mask"] = base64_encode(pack_bits(plan.view_mask));
  j["feature_mask"] = base64_encode(pack_bits(plan.feature_mask));
  j["feature_rows"] = base64_encode(pack_bits(plan.rows_selected));
  return j;
}

MaskPlan decode_plan(const nlohmann::json& j) {
  MaskPlan plan;
  auto& p = plan.params;
  try {
    if (j.at("version").get<int>() != kPlanVersion) throw FormatError("unsupported mask plan version");
    p.batch = j.at("B").get<int>();
    p.views_per_sample = j.at("T").get<int>();
    p.feature_len = j.at("L").get<int>();
    p.p_view = j.at("p_view").get<double>();
    p.row_ratio = j.at("row_ratio").get<double>();
    p.area_ratio = j.at("area_ratio").get<double>();
    p.seed = j.at("seed").get<uint64_t>();
    p.epoch = j.value("epoch", uint64_t{0});
    p.validate();
    const size_t rows = static_cast<size_t>(p.batch) * p.views_per_sample;
    plan.view_mask = unpack_bits(base64_decode(j.at("view_mask").get<std::string>()), rows);
    plan.feature_mask =
        unpack_bits(base64_decode(j.at("feature_mask").get<std::string>()), rows * static_cast<size_t>(p.feature_len));
    if (j.contains("feature_rows")) {
      plan.rows_selected = unpack_bits(base64_decode(j.at("feature_rows").get<std::string>()), rows);
    } else {
      // Older/foreign files: a row is selected iff it has any masked bit.
      plan.rows_selected.assign(rows, false);
      for (size_t r = 0; r < rows; ++r)
        for (int l = 0; l < p.feature_len && !plan.rows_selected[r]; ++l)
          plan.rows_selected[r] = plan.feature_bit(r, static_cast<size_t>(l));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad mask plan: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("bad mask plan: ") + e.what());
  }
  return plan;
}

std::string plan_file_text(const MaskPlan& plan) { return encode_plan(plan).dump(2) + "\n"; }

std::vector<double> default_sweep_grid() { return {1.0, 0.75, 0.5, 0.25, 0.0}; }

std::string sweep_file_name(double row_ratio) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "plan_r%.2f.json", row_ratio);
  return buf;
}

std::vector<std::filesystem::path> sweep_ratios(const std::vector<double>& grid, const PlanParams& base,
                                                const std::filesystem::path& dir) {
  if (grid.empty()) throw InvalidArgument("ratio grid is empty");
  std::vector<std::filesystem::path> out;
  for (double r : grid) {
    PlanParams p = base;
    p.row_ratio = r;
    auto path = dir / sweep_file_name(r);
    write_file_atomic(path, plan_file_text(make_plan(p)));
    out.push_back(path);
  }
  return out;
}

}  // namespace occbench::maskplan
