#include <gtest/gtest.h>

#include <set>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "poses/poses.hpp"

using namespace occbench;
using namespace occbench::poses;

namespace {

void expect_rigid(const CameraMatrix& m) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double d = 0;
      for (int r = 0; r < 3; ++r) d += m(r, a) * m(r, b);
      EXPECT_NEAR(d, a == b ? 1.0 : 0.0, 1e-9);
    }
  const double det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                     m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                     m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  EXPECT_NEAR(det, 1.0, 1e-9);
  EXPECT_EQ(m(3, 0), 0.0);
  EXPECT_EQ(m(3, 1), 0.0);
  EXPECT_EQ(m(3, 2), 0.0);
  EXPECT_EQ(m(3, 3), 1.0);
}

void expect_vec(const Vec3& v, double x, double y, double z, double tol = 1e-12) {
  EXPECT_NEAR(v[0], x, tol);
  EXPECT_NEAR(v[1], y, tol);
  EXPECT_NEAR(v[2], z, tol);
}

}  // namespace

TEST(Pose, FrontViewLooksDownMinusX) {
  const auto m = pose_to_matrix({0, 0, 1, 0});
  expect_vec(m.position(), 1, 0, 0);
  expect_vec(m.forward(), -1, 0, 0);
  expect_vec(m.up(), 0, 0, 1);
  expect_rigid(m);
}

TEST(Pose, Azimuth90Radius2) {
  const auto m = pose_to_matrix({90, 0, 2, 0});
  expect_vec(m.position(), 0, 2, 0);
  expect_vec(m.forward(), 0, -1, 0);
}

TEST(Pose, PositionMatchesSphericalFormula) {
  Rng rng{RngKey(11)};
  for (int i = 0; i < 200; ++i) {
    const SphericalPose p{rng.uniform(0, 360), rng.uniform(-90, 90), rng.uniform(0.1, 5), rng.uniform(-180, 180)};
    const double t = p.azimuth_deg * M_PI / 180, f = p.elevation_deg * M_PI / 180;
    const auto m = pose_to_matrix(p);
    expect_vec(m.position(), p.radius * std::cos(f) * std::cos(t), p.radius * std::cos(f) * std::sin(t),
               p.radius * std::sin(f), 1e-12);
    expect_rigid(m);
    // forward points at the origin
    const auto pos = m.position(), fw = m.forward();
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(fw[k], -pos[k] / p.radius, 1e-12);
  }
}

TEST(Pose, RollRotatesAboutForward) {
  const auto m0 = pose_to_matrix({30, 20, 1, 0});
  const auto m90 = pose_to_matrix({30, 20, 1, 90});
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(m90.forward()[k], m0.forward()[k], 1e-12);
    EXPECT_NEAR(m90.position()[k], m0.position()[k], 1e-12);
    EXPECT_NEAR(m90.right()[k], m0.up()[k], 1e-12);
    EXPECT_NEAR(m90.up()[k], -m0.right()[k], 1e-12);
  }
}

TEST(Pose, PolesUseAzimuthFallback) {
  for (double el : {90.0, -90.0}) {
    const auto m = pose_to_matrix({45, el, 1, 0});
    expect_rigid(m);
    expect_vec(m.position(), 0, 0, el > 0 ? 1 : -1);
    for (int k = 0; k < 3; ++k) EXPECT_TRUE(std::isfinite(m.up()[k]));
  }
}

TEST(Pose, RoundTripOffPole) {
  Rng rng{RngKey(5)};
  for (int i = 0; i < 500; ++i) {
    const SphericalPose p{rng.uniform(0, 360), rng.uniform(-89.9, 89.9), rng.uniform(0.1, 10),
                          rng.uniform(-180, 180)};
    const auto q = matrix_to_pose(pose_to_matrix(p));
    EXPECT_NEAR(q.azimuth_deg, p.azimuth_deg, 1e-9);
    EXPECT_NEAR(q.elevation_deg, p.elevation_deg, 1e-9);
    EXPECT_NEAR(q.radius, p.radius, 1e-9);
    EXPECT_NEAR(q.roll_deg, p.roll_deg, 1e-9);
  }
}

TEST(Pose, NormalizationAndValidation) {
  const auto p = normalized({-30, 10, 1, 190});
  EXPECT_DOUBLE_EQ(p.azimuth_deg, 330);
  EXPECT_DOUBLE_EQ(p.roll_deg, -170);
  EXPECT_DOUBLE_EQ(normalized({360, 0, 1, 180}).azimuth_deg, 0);
  EXPECT_DOUBLE_EQ(normalized({0, 0, 1, 180}).roll_deg, -180);
  EXPECT_THROW(normalized({0, 90.5, 1, 0}), InvalidArgument);
  EXPECT_THROW(normalized({0, 0, 0, 0}), InvalidArgument);
  EXPECT_THROW(pose_to_matrix({0, -91, 1, 0}), InvalidArgument);
}

TEST(ViewSets, Neus36Grid) {
  const auto vs = viewset_neus36(1.5);
  ASSERT_EQ(vs.poses.size(), 36u);
  std::set<std::pair<double, double>> grid;
  for (size_t i = 0; i < vs.poses.size(); ++i) {
    const auto& p = vs.poses[i];
    EXPECT_EQ(p.elevation_deg, -30.0 + 30.0 * static_cast<double>(i / 12));
    EXPECT_EQ(p.azimuth_deg, 30.0 * static_cast<double>(i % 12));
    EXPECT_EQ(p.radius, 1.5);
    EXPECT_EQ(p.roll_deg, 0.0);
    EXPECT_NE(p.azimuth_deg, 360.0);
    grid.insert({p.azimuth_deg, p.elevation_deg});
  }
  EXPECT_EQ(grid.size(), 36u);
  EXPECT_TRUE(grid.count({330.0, 30.0}));
}

TEST(ViewSets, Zero123ppLayout) {
  const auto vs = viewset_zero123pp(0, 2);
  ASSERT_EQ(vs.poses.size(), 6u);
  const double az[] = {30, 90, 150, 210, 270, 330};
  const double el[] = {20, -10, 20, -10, 20, -10};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(vs.poses[i].azimuth_deg, az[i]);
    EXPECT_EQ(vs.poses[i].elevation_deg, el[i]);
    EXPECT_EQ(vs.poses[i].radius, 2.0);
  }
  EXPECT_EQ(viewset_zero123pp(350, 1).poses[0].azimuth_deg, 20.0);
}

TEST(ViewSets, Enhanced42) {
  const auto vs = viewset_enhanced42(0, 1);
  ASSERT_EQ(vs.poses.size(), 42u);
  const auto z = viewset_zero123pp(0, 1);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(vs.poses[i], z.poses[i]);
  std::set<std::pair<double, double>> seen;
  for (const auto& p : vs.poses) seen.insert({p.azimuth_deg, p.elevation_deg});
  EXPECT_EQ(seen.size(), 42u);
  EXPECT_THROW(make_viewset("nope", 0, 1), Error);
  EXPECT_THROW(make_viewset("neus36", 0, -1), Error);
}

TEST(ViewSets, JsonRoundTrip) {
  const auto vs = viewset_enhanced42(17.25, 1.7);
  const auto back = viewset_from_json(nlohmann::json::parse(to_json(vs).dump()));
  EXPECT_EQ(back, vs);
  const auto mats = matrices_json(vs);
  ASSERT_EQ(mats.size(), 42u);
  ASSERT_EQ(mats[0].size(), 4u);
  const auto m = pose_to_matrix(vs.poses[0]);
  EXPECT_EQ(mats[0][1][3].get<double>(), m(1, 3));
}
