#include <gtest/gtest.h>

#include "common/error.hpp"
#include "common/fileio.hpp"
#include "common/format.hpp"
#include "maskplan/maskplan.hpp"
#include "test_util.hpp"

using namespace occbench;
using namespace occbench::maskplan;

namespace {

size_t count_true(const std::vector<bool>& v) { return static_cast<size_t>(std::count(v.begin(), v.end(), true)); }

size_t row_popcount(const MaskPlan& p, size_t row) {
  size_t n = 0;
  for (int i = 0; i < p.params.feature_len; ++i) n += p.feature_bit(row, static_cast<size_t>(i)) ? 1 : 0;
  return n;
}

}  // namespace

TEST(InputMask, DegenerateProbabilities) {
  for (uint64_t s = 0; s < 20; ++s) {
    EXPECT_EQ(count_true(sample_input_mask(6, 0.0, RngKey(s))), 0u);
    EXPECT_EQ(count_true(sample_input_mask(6, 1.0, RngKey(s))), 6u);
  }
}

TEST(InputMask, HalfRateOverManyDraws) {
  size_t hits = 0, total = 0;
  for (uint64_t s = 0; s < 33334; ++s) {
    const auto m = sample_input_mask(3, 0.5, RngKey(99).derive(s));
    hits += count_true(m);
    total += m.size();
  }
  ASSERT_GE(total, 100000u);
  EXPECT_NEAR(static_cast<double>(hits) / static_cast<double>(total), 0.5, 0.01);
}

TEST(FeatureMask, ZeroRowRatioIsEmpty) {
  const auto f = sample_feature_mask(4, 6, 196, 0.0, 0.5, RngKey(1));
  EXPECT_EQ(count_true(f.rows_selected), 0u);
  EXPECT_EQ(count_true(f.mask), 0u);
}

TEST(FeatureMask, AllRowsHalfArea) {
  const auto f = sample_feature_mask(3, 4, 64, 1.0, 0.5, RngKey(2));
  EXPECT_EQ(count_true(f.rows_selected), 12u);
  for (size_t r = 0; r < 12; ++r) {
    size_t n = 0;
    for (size_t i = 0; i < 64; ++i) n += f.mask[r * 64 + i] ? 1 : 0;
    EXPECT_EQ(n, 32u);
  }
}

TEST(FeatureMask, QuarterOfSixRowsIsTwo) {
  for (uint64_t s = 0; s < 50; ++s) {
    const auto f = sample_feature_mask(2, 3, 10, 0.25, 0.5, RngKey(s));
    EXPECT_EQ(count_true(f.rows_selected), 2u);
    for (size_t r = 0; r < 6; ++r) {
      size_t n = 0;
      for (size_t i = 0; i < 10; ++i) n += f.mask[r * 10 + i] ? 1 : 0;
      EXPECT_EQ(n, f.rows_selected[r] ? 5u : 0u);
    }
  }
}

TEST(FeatureMask, RowSelectionIsRoughlyUniform) {
  std::vector<int> hist(8, 0);
  for (uint64_t s = 0; s < 4000; ++s) {
    const auto f = sample_feature_mask(2, 4, 4, 0.25, 0.5, RngKey(s));
    for (size_t r = 0; r < 8; ++r) hist[r] += f.rows_selected[r] ? 1 : 0;
  }
  // 2 of 8 rows per draw: expected 1000 each
  for (int h : hist) EXPECT_NEAR(h, 1000, 150);
}

TEST(Plan, DeterministicAndIndependentLevels) {
  PlanParams p;
  p.batch = 8;
  p.seed = 1234;
  const auto a = make_plan(p);
  EXPECT_EQ(a, make_plan(p));
  PlanParams q = p;
  q.p_view = 0.9;
  const auto b = make_plan(q);
  EXPECT_EQ(a.feature_mask, b.feature_mask);
  EXPECT_EQ(a.rows_selected, b.rows_selected);
  q = p;
  q.row_ratio = 0.75;
  EXPECT_EQ(make_plan(q).view_mask, a.view_mask);
  q = p;
  q.epoch = 1;
  EXPECT_NE(make_plan(q).feature_mask, a.feature_mask);
}

TEST(Plan, ValidationRejectsBadParams) {
  PlanParams p;
  p.row_ratio = 1.5;
  EXPECT_THROW(make_plan(p), Error);
  p = {};
  p.batch = 0;
  EXPECT_THROW(make_plan(p), Error);
  p = {};
  p.p_view = -0.1;
  EXPECT_THROW(make_plan(p), Error);
}

TEST(Plan, EncodeDecodeRoundTrip) {
  PlanParams p;
  p.batch = 5;
  p.views_per_sample = 3;
  p.feature_len = 37;
  p.seed = 77;
  p.epoch = 3;
  const auto plan = make_plan(p);
  const auto text = plan_file_text(plan);
  const auto back = decode_plan(nlohmann::json::parse(text));
  EXPECT_EQ(back, plan);
  EXPECT_EQ(plan_file_text(back), text);

  const auto j = nlohmann::json::parse(text);
  for (const char* key : {"version", "B", "T", "L", "p_view", "row_ratio", "area_ratio", "seed", "view_mask",
                          "feature_mask"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["version"], kPlanVersion);
}

TEST(Plan, RoundTripWhenAreaRoundsToZero) {
  PlanParams p;
  p.batch = 2;
  p.views_per_sample = 2;
  p.feature_len = 3;
  p.row_ratio = 0.5;
  p.area_ratio = 0.1;
  const auto plan = make_plan(p);
  EXPECT_EQ(count_true(plan.rows_selected), 2u);
  EXPECT_EQ(count_true(plan.feature_mask), 0u);
  EXPECT_EQ(decode_plan(nlohmann::json::parse(plan_file_text(plan))), plan);
}

TEST(Plan, CorruptBitFieldIsRejected) {
  auto j = nlohmann::json::parse(plan_file_text(make_plan({})));
  j["feature_mask"] = "AAAA";
  EXPECT_THROW(decode_plan(j), Error);
}

TEST(Sweep, DefaultGridWritesFiveFiles) {
  fixture::TempDir dir("sweep");
  PlanParams base;
  base.batch = 4;
  base.seed = 9;
  const auto grid = default_sweep_grid();
  ASSERT_EQ(grid, (std::vector<double>{1.0, 0.75, 0.5, 0.25, 0.0}));
  const auto files = sweep_ratios(grid, base, dir.path());
  ASSERT_EQ(files.size(), 5u);
  EXPECT_EQ(files[3].filename(), "plan_r0.25.json");
  for (size_t i = 0; i < files.size(); ++i) {
    const auto plan = decode_plan(nlohmann::json::parse(read_file_text(files[i])));
    const size_t rows = static_cast<size_t>(round_half_up(grid[i] * 4 * 6));
    EXPECT_EQ(count_true(plan.rows_selected), rows);
    for (size_t r = 0; r < plan.rows(); ++r)
      EXPECT_EQ(row_popcount(plan, r), plan.rows_selected[r] ? 98u : 0u);
  }
  // determinism at the byte level
  fixture::TempDir again("sweep");
  const auto files2 = sweep_ratios(grid, base, again.path());
  for (size_t i = 0; i < files.size(); ++i) EXPECT_EQ(read_file_bytes(files[i]), read_file_bytes(files2[i]));
}

TEST(Sweep, ZeroGridIsAllFalse) {
  fixture::TempDir dir("sweep");
  const auto files = sweep_ratios({0.0}, {}, dir.path());
  ASSERT_EQ(files.size(), 1u);
  const auto plan = decode_plan(nlohmann::json::parse(read_file_text(files[0])));
  EXPECT_EQ(count_true(plan.feature_mask), 0u);
}
