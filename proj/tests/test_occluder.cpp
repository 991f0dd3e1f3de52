#include <gtest/gtest.h>

#include <set>

#include "common/error.hpp"
#include "common/fileio.hpp"
#include "common/png_io.hpp"
#include "occluder/dataset.hpp"
#include "occluder/library.hpp"
#include "occluder/pattern.hpp"
#include "test_util.hpp"

using namespace occbench;
using namespace occbench::occluder;
using occbench::fixture::TempDir;

namespace {

Silhouette make_silhouette(const std::string& id, const RgbaImage& render) {
  Silhouette s;
  s.id = id;
  s.source = id + ".png";
  EXPECT_TRUE(crop_silhouette(render, 127, s.mask, s.texture));
  s.content_hash = silhouette_hash(s.mask, s.texture);
  return s;
}

SilhouetteLibrary small_library() {
  std::vector<Silhouette> items;
  items.push_back(make_silhouette("disk", fixture::disk_rgba(80, 80, 40, 40, 36, {200, 30, 30})));
  RgbaImage square = fixture::solid_rgba(60, 60, {10, 200, 10, 255});
  items.push_back(make_silhouette("square", square));
  items.push_back(make_silhouette("blob", fixture::disk_rgba(60, 90, 30, 45, 28, {20, 20, 220})));
  return SilhouetteLibrary(std::move(items));
}

/// Writes n object renders plus an input manifest; returns the manifest path.
std::filesystem::path write_corpus(const std::filesystem::path& dir, int n, int size = 64) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    const std::string obj = "obj" + std::to_string(i / 4);
    const int view = i % 4;
    const double r = size * (0.25 + 0.05 * (i % 3));
    const auto img = fixture::disk_rgba(size, size, size / 2.0 + (i % 5) - 2, size / 2.0, r,
                                        {static_cast<uint8_t>(i * 37), static_cast<uint8_t>(i * 11), 90});
    const std::string rel = "views/" + obj + "_" + std::to_string(view) + ".png";
    write_png(dir / rel, img);
    rows.push_back({{"object_id", obj},
                    {"view_index", view},
                    {"clean_path", rel},
                    {"pose", {{"azimuth_deg", 90.0 * view}, {"elevation_deg", 0.0}, {"radius", 1.5}, {"roll_deg", 0.0}}},
                    {"role", view < 2 ? "reference" : "target"}});
  }
  write_file_atomic(dir / "views.json", rows.dump(1));
  return dir / "views.json";
}

}  // namespace

TEST(Library, BuildSkipsEmptyAndRoundTrips) {
  TempDir dir("lib");
  write_png(dir / "renders/a_disk.png", fixture::disk_rgba(32, 32, 16, 16, 10, {1, 2, 3}));
  write_png(dir / "renders/b_empty.png", fixture::solid_rgba(16, 16, {0, 0, 0, 0}));
  write_png(dir / "renders/c_square.png", fixture::solid_rgba(8, 6, {9, 9, 9, 255}));
  write_file_atomic(dir / "renders/d_broken.png", std::string_view("garbage"));
  BuildLibraryReport report;
  const auto lib = build_library(dir / "renders", 127, &report);
  ASSERT_EQ(lib.size(), 2u);
  EXPECT_EQ(report.skipped_empty, 1u);
  EXPECT_EQ(report.failed, 1u);
  EXPECT_EQ(lib[1].mask.width(), 8);
  EXPECT_EQ(lib[1].mask.height(), 6);
  // cropped to the silhouette bounding box
  EXPECT_EQ(lib[0].mask.width(), lib[0].texture.width());

  lib.save(dir / "lib", 127);
  const auto back = SilhouetteLibrary::load(dir / "lib");
  ASSERT_EQ(back.size(), lib.size());
  EXPECT_EQ(back.content_hash(), lib.content_hash());
  EXPECT_EQ(back[0].mask, lib[0].mask);
}

TEST(Library, TamperedMaskFailsHashCheck) {
  TempDir dir("lib");
  const auto lib = small_library();
  lib.save(dir.path(), 127);
  const auto files = list_files(dir / "silhouettes", {".png"});
  ASSERT_FALSE(files.empty());
  BinaryMask m = read_png_mask(dir / "silhouettes/disk_mask.png");
  m.set(0, 0, !m.get(0, 0));
  write_png(dir / "silhouettes/disk_mask.png", m);
  EXPECT_THROW(SilhouetteLibrary::load(dir.path()), Error);
}

TEST(Pattern, IdentityTransform) {
  const auto lib = small_library();
  PatternParams p{1, 1, 1.0, 1.0, 0, 0};
  const auto pat = compose_pattern(lib, p, RngKey(3));
  ASSERT_EQ(pat.parts.size(), 1u);
  EXPECT_EQ(pat.parts[0].scale, 1.0);
  EXPECT_EQ(pat.parts[0].dx, 0);
  EXPECT_EQ(pat.parts[0].dy, 0);
  // renders the silhouette pixel for pixel
  const auto& sil = lib[pat.parts[0].silhouette];
  const int w = sil.mask.width(), h = sil.mask.height();
  const auto r = render_pattern(pat, lib, w, h, w / 2, h / 2);
  EXPECT_EQ(r.mask, sil.mask);
}

TEST(Pattern, Deterministic) {
  const auto lib = small_library();
  const PatternParams p;
  for (uint64_t s = 0; s < 50; ++s) EXPECT_EQ(compose_pattern(lib, p, RngKey(s)), compose_pattern(lib, p, RngKey(s)));
}

TEST(Pattern, CountRangeOverManyDraws) {
  const auto lib = small_library();
  PatternParams p;
  p.count_min = 2;
  p.count_max = 4;
  std::set<size_t> counts;
  for (uint64_t s = 0; s < 1000; ++s) {
    const auto pat = compose_pattern(lib, p, RngKey(s));
    ASSERT_GE(pat.parts.size(), 2u);
    ASSERT_LE(pat.parts.size(), 4u);
    counts.insert(pat.parts.size());
    for (const auto& part : pat.parts) {
      ASSERT_GE(part.scale, p.scale_min);
      ASSERT_LE(part.scale, p.scale_max);
      ASSERT_GE(part.dx, p.shift_min);
      ASSERT_LE(part.dx, p.shift_max);
    }
  }
  EXPECT_EQ(counts.size(), 3u);
}

TEST(Pattern, EmptyLibraryAndBadParams) {
  EXPECT_THROW(compose_pattern(SilhouetteLibrary{}, {}, RngKey(1)), ConfigError);
  PatternParams p;
  p.count_min = 3;
  p.count_max = 1;
  EXPECT_THROW(compose_pattern(small_library(), p, RngKey(1)), Error);
}

TEST(Pattern, FillParsing) {
  EXPECT_EQ(parse_fill("gray").policy, FillPolicy::SolidColor);
  EXPECT_EQ(parse_fill("texture").policy, FillPolicy::SourceTexture);
  const auto f = parse_fill("rgb:1,2,3");
  EXPECT_EQ(f.color, (Rgb{1, 2, 3}));
  EXPECT_EQ(parse_fill(fill_to_string(f)).color, f.color);
  EXPECT_THROW(parse_fill("rgb:1,2"), Error);
  EXPECT_THROW(parse_fill("purple"), Error);
}

TEST(Overlay, HalfMaskFraction) {
  BinaryMask object(10, 10), mask(10, 10);
  for (int y = 2; y < 8; ++y)
    for (int x = 2; x < 8; ++x) object.set(x, y, true);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 5; ++x) mask.set(x, y, true);
  EXPECT_EQ(occlusion_fraction(mask, object), 0.5);
  EXPECT_THROW(occlusion_fraction(mask, BinaryMask(10, 10)), Error);
}

TEST(Overlay, OffObjectPlacementFails) {
  const auto lib = small_library();
  OcclusionPattern pat;
  pat.parts.push_back({0, 0.5, 1000, 1000});
  const auto clean = fixture::disk_rgba(64, 64, 32, 32, 16, {5, 6, 7});
  const auto r = overlay_occlusion(clean, pat, lib, {0.1, 0.6}, 20, RngKey(1));
  EXPECT_FALSE(r.placed);
  EXPECT_EQ(r.occluded, clean);
  EXPECT_EQ(r.mask.popcount(), 0u);
  EXPECT_EQ(r.tries, 20);
}

TEST(Overlay, EmptyObjectIsRejected) {
  const auto lib = small_library();
  const auto pat = compose_pattern(lib, {}, RngKey(1));
  try {
    overlay_occlusion(fixture::solid_rgba(32, 32, {0, 0, 0, 0}), pat, lib, {}, 10, RngKey(2));
    FAIL() << "expected an error";
  } catch (const EmptyInputError& e) {
    EXPECT_NE(std::string(e.what()).find("empty object"), std::string::npos);
  }
}

TEST(Overlay, PlacedResultIsConsistent) {
  const auto lib = small_library();
  const auto clean = fixture::disk_rgba(96, 96, 48, 48, 30, {50, 60, 70});
  const auto object = extract_silhouette(clean, 127);
  int placed = 0;
  for (uint64_t s = 0; s < 40; ++s) {
    const auto pat = compose_pattern(lib, {}, RngKey(s));
    const auto r = overlay_occlusion(clean, pat, lib, {0.1, 0.6}, 100, RngKey(s).derive("place"));
    if (!r.placed) continue;
    ++placed;
    EXPECT_GE(r.occlusion_fraction, 0.1);
    EXPECT_LE(r.occlusion_fraction, 0.6);
    EXPECT_EQ(r.occlusion_fraction, occlusion_fraction(r.mask, object));
    for (int y = 0; y < 96; ++y)
      for (int x = 0; x < 96; ++x) {
        const uint8_t* a = clean.at(x, y);
        const uint8_t* b = r.occluded.at(x, y);
        if (r.mask.get(x, y)) {
          EXPECT_EQ(b[0], 128);
          EXPECT_EQ(b[3], 255);
        } else {
          ASSERT_TRUE(std::equal(a, a + 4, b));
        }
      }
    // same key, same bytes
    EXPECT_EQ(overlay_occlusion(clean, pat, lib, {0.1, 0.6}, 100, RngKey(s).derive("place")).occluded, r.occluded);
  }
  EXPECT_GT(placed, 30);
}

TEST(Overlay, TextureFillCopiesDonorPixels) {
  const auto lib = small_library();
  OcclusionPattern pat;
  pat.fill = parse_fill("texture");
  pat.parts.push_back({1, 1.0, 0, 0});  // the green square
  const auto r = render_pattern(pat, lib, 40, 40, 20, 20);
  EXPECT_EQ(r.mask.popcount(), 1600u);
  EXPECT_EQ(r.paint.at(20, 20)[1], 200);
}

TEST(Dataset, ZeroProbabilityCopiesInputs) {
  TempDir dir("ds");
  const auto rows = read_input_manifest(write_corpus(dir / "in", 12));
  DatasetOptions opt;
  opt.p_occlude = 0.0;
  const auto out = build_paired_dataset(rows, small_library(), opt, dir / "out");
  ASSERT_EQ(out.size(), 12u);
  for (size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].status, "ok");
    EXPECT_FALSE(out[i].occluded_flag);
    EXPECT_EQ(out[i].occlusion_fraction, 0.0);
    const auto src = read_file_bytes(rows[i].clean_path);
    EXPECT_EQ(read_file_bytes(dir / "out" / out[i].clean_path), src);
    EXPECT_EQ(read_file_bytes(dir / "out" / out[i].occluded_path), src);
    EXPECT_EQ(read_png_mask(dir / "out" / out[i].mask_path).popcount(), 0u);
  }
}

TEST(Dataset, FullProbabilityRespectsBounds) {
  TempDir dir("ds");
  const auto rows = read_input_manifest(write_corpus(dir / "in", 24));
  DatasetOptions opt;
  opt.p_occlude = 1.0;
  const auto out = build_paired_dataset(rows, small_library(), opt, dir / "out");
  int ok = 0;
  for (const auto& s : out) {
    if (s.status != "ok") {
      EXPECT_EQ(s.status, "placement_failed");
      continue;
    }
    ++ok;
    EXPECT_TRUE(s.occluded_flag);
    EXPECT_GE(s.occlusion_fraction, 0.1);
    EXPECT_LE(s.occlusion_fraction, 0.6);
  }
  EXPECT_GT(ok, 20);
}

TEST(Dataset, HalfProbabilityOverTenThousandRows) {
  TempDir dir("ds");
  const auto one = fixture::disk_rgba(16, 16, 8, 8, 6, {10, 20, 30});
  write_png(dir / "v.png", one);
  std::vector<InputRow> rows(10000);
  for (size_t i = 0; i < rows.size(); ++i) {
    rows[i].object_id = "o" + std::to_string(i / 10);
    rows[i].view_index = static_cast<int>(i % 10);
    rows[i].clean_path = dir / "v.png";
    rows[i].clean_path_text = "v.png";
  }
  DatasetOptions opt;
  opt.p_occlude = 0.5;
  opt.bounds = {0.0, 1.0};  // any placement is accepted, so the share equals the draw rate
  opt.workers = 4;
  const auto out = build_paired_dataset(rows, small_library(), opt, dir / "out");
  size_t occluded = 0;
  for (const auto& s : out) occluded += s.occluded_flag ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(occluded) / static_cast<double>(out.size()), 0.5, 0.02);
}

TEST(Dataset, WorkerCountAndRowOrderDoNotMatter) {
  TempDir dir("ds");
  auto rows = read_input_manifest(write_corpus(dir / "in", 16));
  DatasetOptions opt;
  opt.base_seed = 5;
  const auto lib = small_library();
  const auto a = build_paired_dataset(rows, lib, opt, dir / "a");
  opt.workers = 8;
  std::reverse(rows.begin(), rows.end());
  auto b = build_paired_dataset(rows, lib, opt, dir / "b");
  std::reverse(b.begin(), b.end());
  EXPECT_EQ(manifest_json(a).dump(), manifest_json(b).dump());
  for (const auto& s : a) {
    EXPECT_EQ(read_file_bytes(dir / "a" / s.occluded_path), read_file_bytes(dir / "b" / s.occluded_path));
    EXPECT_EQ(read_file_bytes(dir / "a" / s.mask_path), read_file_bytes(dir / "b" / s.mask_path));
  }
}

TEST(Dataset, SplitsUseDifferentKeys) {
  EXPECT_NE(sample_key(1, "train", "o", 0), sample_key(1, "test", "o", 0));
  EXPECT_NE(sample_key(1, "train", "o", 0), sample_key(1, "train", "o", 1));
  EXPECT_NE(sample_key(1, "train", "o", 0), sample_key(2, "train", "o", 0));
}

TEST(Dataset, UnreadableImageFlaggedMissingPoseFatal) {
  TempDir dir("ds");
  const auto manifest = write_corpus(dir / "in", 4);
  auto rows = read_input_manifest(manifest);
  rows[1].clean_path = dir / "in/does_not_exist.png";
  DatasetOptions opt;
  opt.p_occlude = 1.0;
  const auto out = build_paired_dataset(rows, small_library(), opt, dir / "out");
  EXPECT_EQ(out[1].status, "read_failed");
  EXPECT_EQ(out[0].object_id, rows[0].object_id);

  auto j = nlohmann::json::parse(read_file_text(manifest));
  j[2].erase("pose");
  write_file_atomic(dir / "in/bad.json", j.dump());
  EXPECT_THROW(read_input_manifest(dir / "in/bad.json"), ConfigError);
}

TEST(Dataset, EmptyObjectRowIsFlagged) {
  TempDir dir("ds");
  write_png(dir / "clear.png", fixture::solid_rgba(16, 16, {0, 0, 0, 0}));
  std::vector<InputRow> rows(1);
  rows[0].object_id = "x";
  rows[0].clean_path = dir / "clear.png";
  DatasetOptions opt;
  opt.p_occlude = 1.0;
  const auto out = build_paired_dataset(rows, small_library(), opt, dir / "out");
  EXPECT_EQ(out[0].status, "empty_object");
  EXPECT_FALSE(out[0].occluded_flag);
}

TEST(Dataset, ManifestRoundTrip) {
  TempDir dir("ds");
  const auto rows = read_input_manifest(write_corpus(dir / "in", 8));
  DatasetOptions opt;
  opt.p_occlude = 0.5;
  const auto out = build_paired_dataset(rows, small_library(), opt, dir / "out");
  const auto j = manifest_json(out);
  const auto back = samples_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(manifest_json(back).dump(), j.dump());
  const std::vector<std::string> keys{"object_id",  "view_index",         "pose",          "clean_path",
                                      "occluded_path", "mask_path",       "occlusion_fraction", "occluded_flag",
                                      "seed_key",   "status"};
  std::vector<std::string> got;
  for (const auto& [k, v] : j[0].items()) got.push_back(k);
  EXPECT_EQ(got, keys);
}
