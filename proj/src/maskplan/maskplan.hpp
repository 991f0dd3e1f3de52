#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "common/rng.hpp"

namespace occbench::maskplan {

inline constexpr int kPlanVersion = 1;

struct PlanParams {
  int batch = 64;             // B
  int views_per_sample = 6;   // T
  int feature_len = 196;      // L, feature-map area per view
  double p_view = 0.5;        // input-level masking probability per view
  double row_ratio = 0.25;    // share of the B*T rows that receive feature masking
  double area_ratio = 0.5;    // share of L masked inside a selected row
  uint64_t seed = 0;
  uint64_t epoch = 0;

  void validate() const;

  friend bool operator==(const PlanParams&, const PlanParams&) = default;
};

/// Boolean masks over a [B*T, L] feature layout plus the B x T view mask.
/// The channel dimension is never masked. Replacement values are left to the
/// consumer; zero-fill is the suggested default.
struct MaskPlan {
  PlanParams params;
  std::vector<bool> view_mask;       // B*T, row-major, true = input-masked view
  std::vector<bool> rows_selected;   // B*T, true = row receives feature masking
  std::vector<bool> feature_mask;    // (B*T)*L, row-major

  size_t rows() const { return view_mask.size(); }
  bool feature_bit(size_t row, size_t pos) const {
    return feature_mask[row * static_cast<size_t>(params.feature_len) + pos];
  }

  friend bool operator==(const MaskPlan&, const MaskPlan&) = default;
};

/// T independent Bernoulli(p_view) draws.
std::vector<bool> sample_input_mask(int views, double p_view, RngKey key);

struct FeatureMask {
  std::vector<bool> rows_selected;
  std::vector<bool> mask;
};

/// Exactly round(row_ratio*B*T) rows chosen without replacement; in each,
/// exactly round(area_ratio*L) positions chosen without replacement.
FeatureMask sample_feature_mask(int batch, int views, int feature_len, double row_ratio, double area_ratio,
                                RngKey key);

/// View and feature masks come from disjoint subkeys of (seed, epoch).
MaskPlan make_plan(const PlanParams& params);

/// Header fields followed by the LSB-first base64 bit fields, in a fixed key
/// order so files are byte-stable.
nlohmann::ordered_json encode_plan(const MaskPlan& plan);
MaskPlan decode_plan(const nlohmann::json& j);

/// Deterministic serialized bytes of encode_plan (trailing newline).
std::string plan_file_text(const MaskPlan& plan);

/// Row-ratio sweep; the default grid is the five feature-level ratios.
std::vector<double> default_sweep_grid();
/// File name used for a ratio, e.g. "plan_r0.25.json".
std::string sweep_file_name(double row_ratio);
/// Writes one plan file per ratio into dir and returns their paths in grid order.
std::vector<std::filesystem::path> sweep_ratios(const std::vector<double>& grid, const PlanParams& base,
                                                const std::filesystem::path& dir);

}  // namespace occbench::maskplan
