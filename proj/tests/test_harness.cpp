#include <gtest/gtest.h>

#include <json.hpp>

#include "common/error.hpp"
#include "common/fileio.hpp"
#include "common/png_io.hpp"
#include "harness/harness.hpp"
#include "occluder/dataset.hpp"
#include "occluder/library.hpp"
#include "test_util.hpp"

using namespace occbench;
using namespace occbench::harness;
using nlohmann::json;
using occbench::fixture::TempDir;

namespace fs = std::filesystem;

namespace {

RunConfig cfg(const std::string& command, json params, int workers = 1) {
  return {command, std::move(params), workers};
}

std::vector<std::string> report_rows(const std::string& md, const std::string& section) {
  std::vector<std::string> rows;
  const size_t start = md.find(section);
  if (start == std::string::npos) return rows;
  size_t pos = md.find("|---|", start);
  pos = md.find('\n', pos) + 1;
  while (pos < md.size() && md[pos] == '|') {
    const size_t end = md.find('\n', pos);
    const std::string line = md.substr(pos, end - pos);
    rows.push_back(line.substr(2, line.find(" |", 2) - 2));
    pos = end + 1;
  }
  return rows;
}

}  // namespace

TEST(Config, DefaultsAreFilledIn) {
  const auto c = normalize_config(cfg("mask-plan", {{"out", "p.json"}}));
  EXPECT_EQ(c.params["b"], 64);
  EXPECT_EQ(c.params["t"], 6);
  EXPECT_EQ(c.params["l"], 196);
  EXPECT_EQ(c.params["row_ratio"], 0.25);
  EXPECT_EQ(c.params["area_ratio"], 0.5);
  EXPECT_EQ(c.params["p_view"], 0.5);
  const auto o = normalize_config(cfg("make-occnvs", {{"input", "a"}, {"library", "b"}, {"out", "c"}}));
  EXPECT_EQ(o.params["p_occlude"], 1.0);
  EXPECT_EQ(o.params["p_occlude_target"], 0.0);
  EXPECT_EQ(o.params["split"], "test");
  const auto g = normalize_config(cfg("gen-occlusions", {{"input", "a"}, {"library", "b"}, {"out", "c"}}));
  EXPECT_EQ(g.params["p_occlude"], 0.5);
  EXPECT_EQ(g.params["f_min"], 0.1);
  EXPECT_EQ(g.params["f_max"], 0.6);
  EXPECT_EQ(g.params["max_tries"], 100);
}

TEST(Config, RejectsUnknownMissingAndMistyped) {
  EXPECT_THROW(normalize_config(cfg("explode", json::object())), ConfigError);
  EXPECT_THROW(normalize_config(cfg("mask-plan", {{"out", "p"}, {"bb", 3}})), ConfigError);
  EXPECT_THROW(normalize_config(cfg("mask-plan", json::object())), ConfigError);
  EXPECT_THROW(normalize_config(cfg("mask-plan", {{"out", "p"}, {"b", "big"}})), ConfigError);
  EXPECT_THROW(normalize_config(cfg("gen-poses", {{"set", "neus36"}, {"out", "p"}})), ConfigError);  // radius
  EXPECT_THROW(normalize_config(cfg("mask-plan", {{"out", "p"}}, 0)), ConfigError);
  EXPECT_EQ(command_names().size(), 9u);
}

TEST(Config, JsonRoundTrip) {
  const auto c = normalize_config(cfg("eval-3d", {{"pred", "a"}, {"gt", "b"}, {"out", "c"}}, 3));
  const auto back = config_from_json(json::parse(config_to_json(c).dump()));
  EXPECT_EQ(back.command, c.command);
  EXPECT_EQ(back.params, c.params);
  EXPECT_EQ(back.workers, 3);
}

TEST(Run, GenPosesWritesThirtySixEntries) {
  TempDir dir("run");
  const auto r = run(cfg("gen-poses", {{"set", "neus36"}, {"radius", 2.0}, {"out", (dir / "poses.json").string()}}));
  EXPECT_EQ(r.exit_code, kExitOk);
  const auto j = json::parse(read_file_text(dir / "poses.json"));
  EXPECT_EQ(j["poses"].size(), 36u);
  EXPECT_TRUE(fs::exists(dir / "poses.json.config.json"));
  EXPECT_TRUE(fs::exists(dir / "poses.json.status.json"));
}

TEST(Run, RunDirectoryReexecutesIdentically) {
  TempDir dir("run");
  const auto first = run(cfg("mask-plan", {{"b", 4}, {"seed", 3}, {"out", "plans"}, {"sweep", {1.0, 0.5}}}),
                         dir / "runs");
  ASSERT_EQ(first.exit_code, kExitOk);
  ASSERT_TRUE(first.run_dir.string().starts_with((dir / "runs").string()));
  EXPECT_TRUE(fs::exists(first.run_dir / "plans" / "plan_r0.50.json"));
  const auto config = config_from_json(json::parse(read_file_text(first.run_dir / "config.json")));
  const auto second = run(config, dir / "rerun");
  EXPECT_NE(first.run_dir, second.run_dir);
  EXPECT_TRUE(diff_trees(first.run_dir, second.run_dir).empty());
  // two runs under the same root get distinct directories
  const auto third = run(config, dir / "runs");
  EXPECT_NE(third.run_dir, first.run_dir);
}

TEST(Run, PartialFailureExitCode) {
  TempDir dir("run");
  write_fixtures(dir / "fx");
  fs::remove_all(dir / "fx/pred3d");
  fs::create_directories(dir / "fx/pred3d");
  write_file_atomic(dir / "fx/pred3d/cube.obj", read_file_text(dir / "fx/gt3d/cube.obj"));
  const auto r = run(cfg("eval-3d", {{"pred", (dir / "fx/pred3d").string()},
                                     {"gt", (dir / "fx/gt3d").string()},
                                     {"points", 500},
                                     {"resolution", 16},
                                     {"out", (dir / "e3").string()}}));
  EXPECT_EQ(r.exit_code, kExitPartial);
  const auto status = json::parse(read_file_text(dir / "e3/status.json"));
  EXPECT_EQ(status["exit_code"], kExitPartial);
}

TEST(Run, HardErrorsPropagate) {
  TempDir dir("run");
  EXPECT_THROW(run(cfg("eval-2d", {{"pred", (dir / "none").string()},
                                   {"gt", (dir / "missing.json").string()},
                                   {"out", (dir / "o").string()}})),
               IoError);
}

TEST(OccNvs, ReferenceViewsOccludedTargetsClean) {
  TempDir dir("occnvs");
  write_fixtures(dir / "fx");
  const auto library = occluder::build_library(dir / "fx/renders", 127);
  const auto rows = occluder::read_input_manifest(dir / "fx/views.json");
  occluder::DatasetOptions opt;
  opt.p_occlude = 1.0;
  opt.split = "test";
  const auto test = make_occnvs_split(rows, library, opt, dir / "test");
  ASSERT_EQ(test.size(), rows.size());
  size_t refs = 0, placed = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].role == "reference") {
      ++refs;
      placed += test[i].occluded_flag;
      if (!test[i].occluded_flag) EXPECT_EQ(test[i].status, "placement_failed");
    } else {
      EXPECT_FALSE(test[i].occluded_flag);
      EXPECT_EQ(read_file_bytes(dir / "test" / test[i].occluded_path), read_file_bytes(rows[i].clean_path));
    }
  }
  EXPECT_GT(refs, 0u);
  EXPECT_EQ(placed, refs);

  // the training split draws different masks for the same images
  opt.split = "train";
  opt.p_occlude_target = 1.0;
  const auto train = occluder::build_paired_dataset(rows, library, opt, dir / "train");
  size_t compared = 0, differ = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!test[i].occluded_flag || !train[i].occluded_flag) continue;
    ++compared;
    differ += read_file_bytes(dir / "test" / test[i].mask_path) != read_file_bytes(dir / "train" / train[i].mask_path);
    EXPECT_NE(test[i].seed_key, train[i].seed_key);
  }
  EXPECT_GT(compared, 0u);
  EXPECT_EQ(differ, compared);
}

TEST(Report, RowsFollowReferenceViewCounts) {
  TempDir dir("report");
  write_file_atomic(dir / "e2/rows.csv",
                    std::string_view("dataset,object_id,view_index,n_ref_views,psnr_db,ssim,status\n"
                                     "gso,a,1,1,20.5,0.8,ok\n"
                                     "gso,a,1,3,inf,1,ok\n"
                                     "gso,b,1,3,30,0.9,ok\n"
                                     "gso,b,2,3,,,missing\n"));
  const std::string md = render_report({dir / "e2"}, {1, 2, 3, 5, 10}, dir / "out");
  EXPECT_EQ(report_rows(md, "### gso"), (std::vector<std::string>{"1", "2", "3", "5", "10"}));
  EXPECT_NE(md.find("| 1 | 20.5 | 0.8 | 1 | 0 |"), std::string::npos) << md;
  EXPECT_NE(md.find("| 2 | - | - | - | - |"), std::string::npos);
  EXPECT_NE(md.find("| 3 | 30 | 0.95 | 2 | 1 |"), std::string::npos) << md;
  // the aggregate CSV is recomputed from the rows
  EXPECT_EQ(read_file_text(dir / "out/aggregate_2d.csv"),
            "dataset,n_ref_views,mean_psnr,mean_ssim,count,inf_count\ngso,1,20.5,0.8,1,0\ngso,3,30,0.95,2,1\n");
}

TEST(Report, ThreeDimensionalSection) {
  TempDir dir("report");
  write_file_atomic(dir / "e3/rows.csv",
                    std::string_view("dataset,object_id,n_ref_views,chamfer,volume_iou,watertight_pred,status\n"
                                     "gso,a,1,0.25,0.5,true,ok\n"
                                     "gso,b,1,0.75,0.25,false,ok\n"));
  const std::string md = render_report({dir / "e3"}, {1, 2, 3, 5, 10}, dir / "out");
  EXPECT_NE(md.find("## 3D reconstruction"), std::string::npos);
  EXPECT_NE(md.find("| 1 | 0.5 | 0.375 | 2 |"), std::string::npos) << md;
  EXPECT_EQ(report_rows(md, "### gso").size(), 5u);
}

TEST(Report, RejectsUnknownTables) {
  TempDir dir("report");
  write_file_atomic(dir / "x/rows.csv", std::string_view("a,b\n1,2\n"));
  EXPECT_THROW(render_report({dir / "x"}, {1}, dir / "out"), FormatError);
}

TEST(Selftest, PassesAndIsDeterministic) {
  TempDir dir("selftest");
  const auto r = run(cfg("selftest", {{"out", dir.path().string()}, {"points", 1500}, {"resolution", 20}}));
  EXPECT_EQ(r.exit_code, kExitOk) << r.summary;
  EXPECT_TRUE(r.summary.starts_with("PASS")) << r.summary;
  EXPECT_TRUE(diff_trees(dir / "run_a", dir / "run_b").empty());
  // tampering is noticed
  write_file_atomic(dir / "run_b/eval2d/rows.csv", std::string_view("changed"));
  EXPECT_EQ(diff_trees(dir / "run_a", dir / "run_b"), std::vector<std::string>{"eval2d/rows.csv differs"});
}

TEST(Fixtures, Deterministic) {
  TempDir dir("fx");
  write_fixtures(dir / "a");
  write_fixtures(dir / "b");
  EXPECT_TRUE(diff_trees(dir / "a", dir / "b").empty());
}
