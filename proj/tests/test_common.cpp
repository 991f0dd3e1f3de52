#include <gtest/gtest.h>

#include <set>

#include "common/base64.hpp"
#include "common/csv.hpp"
#include "common/error.hpp"
#include "common/fileio.hpp"
#include "common/format.hpp"
#include "common/image.hpp"
#include "common/parallel.hpp"
#include "common/png_io.hpp"
#include "common/rng.hpp"
#include "test_util.hpp"

using namespace occbench;
using occbench::fixture::TempDir;

TEST(Rng, SameKeySameStream) {
  Rng a{RngKey(42).derive("x")}, b{RngKey(42).derive("x")};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, DerivedKeysDiffer) {
  const RngKey k(7);
  std::set<uint64_t> seen;
  for (uint64_t i = 0; i < 1000; ++i) seen.insert(k.derive(i).value());
  seen.insert(k.derive("a").value());
  seen.insert(k.derive("b").value());
  EXPECT_EQ(seen.size(), 1002u);
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  Rng r{RngKey(1)};
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = r.below(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
  }
  for (int h : hist) EXPECT_GT(h, 800);
}

TEST(Rng, BetweenInclusive) {
  Rng r{RngKey(3)};
  bool lo = false, hi = false;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.between(-2, 2);
    ASSERT_GE(v, -2);
    ASSERT_LE(v, 2);
    lo |= v == -2;
    hi |= v == 2;
  }
  EXPECT_TRUE(lo && hi);
}

TEST(Base64, KnownVectors) {
  const std::string s = "foobar";
  const std::vector<uint8_t> bytes(s.begin(), s.end());
  EXPECT_EQ(base64_encode(std::span(bytes).first(0)), "");
  EXPECT_EQ(base64_encode(std::span(bytes).first(1)), "Zg==");
  EXPECT_EQ(base64_encode(std::span(bytes).first(2)), "Zm8=");
  EXPECT_EQ(base64_encode(bytes), "Zm9vYmFy");
  EXPECT_EQ(base64_decode("Zm9vYmE="), std::vector<uint8_t>(bytes.begin(), bytes.end() - 1));
  EXPECT_THROW(base64_decode("Zm9v*mFy"), FormatError);
}

TEST(Base64, BitsAreLsbFirst) {
  std::vector<bool> bits(10, false);
  bits[0] = true;
  bits[9] = true;
  const auto packed = pack_bits(bits);
  ASSERT_EQ(packed.size(), 2u);
  EXPECT_EQ(packed[0], 0x01);
  EXPECT_EQ(packed[1], 0x02);
  EXPECT_EQ(unpack_bits(packed, 10), bits);
}

TEST(Format, DoubleRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 24.0654, 1e-300, -5.5}) {
    double back = 0;
    ASSERT_TRUE(parse_double(format_double(v), back));
    EXPECT_EQ(back, v);
  }
  EXPECT_EQ(format_double(INFINITY), "inf");
  double inf = 0;
  ASSERT_TRUE(parse_double("inf", inf));
  EXPECT_TRUE(std::isinf(inf));
  double junk;
  EXPECT_FALSE(parse_double("1.5x", junk));
}

TEST(Format, RoundHalfUp) {
  EXPECT_EQ(round_half_up(0.25 * 6), 2);
  EXPECT_EQ(round_half_up(2.5), 3);
  EXPECT_EQ(round_half_up(0.5 * 196), 98);
  EXPECT_EQ(round_half_up(0.0), 0);
}

TEST(Csv, QuotingRoundTrip) {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{"plain", "with,comma"}, {"quote\"d", "line\nbreak"}};
  const CsvTable back = parse_csv(t.to_string());
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.column("b"), 1);
  EXPECT_EQ(back.column("zzz"), -1);
}

TEST(Parallel, EveryIndexOnceAndErrorsPropagate) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3, [](size_t i) {
                 if (i == 5) throw InvalidArgument("boom");
               }),
               InvalidArgument);
}

TEST(Silhouette, TransparentOpaqueAndHalf) {
  const auto clear = extract_silhouette(fixture::solid_rgba(256, 256, {0, 0, 0, 0}), 127);
  EXPECT_EQ(clear.popcount(), 0u);
  EXPECT_DOUBLE_EQ(clear.coverage(), 0.0);
  const auto full = extract_silhouette(fixture::solid_rgba(256, 256, {9, 9, 9, 255}), 127);
  EXPECT_DOUBLE_EQ(full.coverage(), 1.0);

  RgbaImage half(256, 256);
  for (int y = 0; y < 256; ++y)
    for (int x = 0; x < 128; ++x) half.at(x, y)[3] = 255;
  EXPECT_EQ(extract_silhouette(half, 127).coverage(), 0.5);
}

TEST(Silhouette, ThresholdIsStrict) {
  const auto at = extract_silhouette(fixture::solid_rgba(4, 4, {0, 0, 0, 127}), 127);
  EXPECT_EQ(at.popcount(), 0u);
  const auto above = extract_silhouette(fixture::solid_rgba(4, 4, {0, 0, 0, 128}), 127);
  EXPECT_EQ(above.popcount(), 16u);
}

TEST(PngIo, RgbaAndMaskRoundTrip) {
  TempDir dir("png");
  RgbaImage img(5, 3);
  for (size_t i = 0; i < img.data().size(); ++i) img.data()[i] = static_cast<uint8_t>(i * 17);
  write_png(dir / "a.png", img);
  EXPECT_EQ(read_png_rgba(dir / "a.png"), img);

  BinaryMask m(4, 4);
  m.set(1, 2, true);
  m.set(3, 0, true);
  write_png(dir / "m.png", m);
  EXPECT_EQ(read_png_mask(dir / "m.png"), m);
}

TEST(PngIo, MissingFileIsIoError) {
  TempDir dir("png");
  EXPECT_THROW(read_png_rgba(dir / "nope.png"), IoError);
  write_file_atomic(dir / "junk.png", std::string_view("not a png"));
  EXPECT_THROW(read_png_rgba(dir / "junk.png"), Error);
}

TEST(FileIo, ListFilesSortedAndFiltered) {
  TempDir dir("ls");
  write_file_atomic(dir / "b.PNG", std::string_view("x"));
  write_file_atomic(dir / "a.png", std::string_view("x"));
  write_file_atomic(dir / "c.txt", std::string_view("x"));
  const auto files = list_files(dir.path(), {".png"});
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].filename(), "a.png");
  EXPECT_EQ(files[1].filename(), "b.PNG");
}
