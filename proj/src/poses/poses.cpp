#include "poses/poses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common/error.hpp"

namespace occbench::poses {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 unit(const Vec3& a) { return scale(a, 1.0 / std::sqrt(dot(a, a))); }

double wrap(double v, double lo, double period) {
  double r = std::fmod(v - lo, period);
  if (r < 0) r += period;
  if (r >= period) r = 0;
  return lo + r + 0.0;  // +0.0 folds -0 into 0
}

// exact cos/sin for multiples of 90 degrees keep generated grids free of
// 6e-17 noise on the axes
void sincos_deg(double deg, double& s, double& c) {
  double q = deg / 90.0;
  if (q == std::floor(q)) {
    int k = static_cast<int>(std::fmod(std::fmod(q, 4.0) + 4.0, 4.0));
    static constexpr double kSin[] = {0, 1, 0, -1};
    static constexpr double kCos[] = {1, 0, -1, 0};
    s = kSin[k];
    c = kCos[k];
    return;
  }
  s = std::sin(deg * kDegToRad);
  c = std::cos(deg * kDegToRad);
}

// Right and up axes before roll.
void base_frame(const SphericalPose& pose, const Vec3& forward, Vec3& right, Vec3& up) {
  Vec3 world_up{0, 0, 1};
  if (std::abs(pose.elevation_deg) == 90.0) {
    double s, c;
    sincos_deg(pose.azimuth_deg, s, c);
    world_up = {c, s, 0};
  }
  right = unit(cross(forward, world_up));
  up = cross(right, forward);
}

}  // namespace

SphericalPose normalized(SphericalPose pose) {
  if (!std::isfinite(pose.azimuth_deg) || !std::isfinite(pose.elevation_deg) || !std::isfinite(pose.radius) ||
      !std::isfinite(pose.roll_deg))
    throw InvalidArgument("pose fields must be finite");
  if (pose.elevation_deg < -90.0 || pose.elevation_deg > 90.0)
    throw InvalidArgument("elevation outside [-90, 90]: " + std::to_string(pose.elevation_deg));
  if (!(pose.radius > 0.0)) throw InvalidArgument("radius must be > 0");
  pose.azimuth_deg = wrap(pose.azimuth_deg, 0.0, 360.0);
  pose.roll_deg = wrap(pose.roll_deg, -180.0, 360.0);
  return pose;
}

Vec3 spherical_to_cartesian(const SphericalPose& pose) {
  double st, ct, sp, cp;
  sincos_deg(pose.azimuth_deg, st, ct);
  sincos_deg(pose.elevation_deg, sp, cp);
  return {pose.radius * cp * ct, pose.radius * cp * st, pose.radius * sp};
}

CameraMatrix pose_to_matrix(const SphericalPose& in) {
  const SphericalPose pose = normalized(in);
  const Vec3 position = spherical_to_cartesian(pose);
  const Vec3 forward = unit(scale(position, -1.0));
  Vec3 right, up;
  base_frame(pose, forward, right, up);

  double sr, cr;
  sincos_deg(pose.roll_deg, sr, cr);
  const Vec3 rolled_right = add(scale(right, cr), scale(up, sr));
  const Vec3 rolled_up = add(scale(right, -sr), scale(up, cr));

  CameraMatrix out;
  for (int r = 0; r < 3; ++r) {
    out(r, 0) = rolled_right[r];
    out(r, 1) = rolled_up[r];
    out(r, 2) = -forward[r];
    out(r, 3) = position[r];
  }
  out(3, 3) = 1.0;
  return out;
}

SphericalPose matrix_to_pose(const CameraMatrix& matrix) {
  const Vec3 p = matrix.position();
  SphericalPose pose;
  pose.radius = std::sqrt(dot(p, p));
  if (!(pose.radius > 0.0)) throw InvalidArgument("camera at the origin has no spherical pose");
  pose.elevation_deg = std::asin(std::clamp(p[2] / pose.radius, -1.0, 1.0)) * kRadToDeg;
  pose.azimuth_deg = std::atan2(p[1], p[0]) * kRadToDeg;
  pose = normalized(pose);

  Vec3 right, up;
  base_frame(pose, matrix.forward(), right, up);
  const Vec3 rolled_right = matrix.right();
  pose.roll_deg = std::atan2(dot(rolled_right, up), dot(rolled_right, right)) * kRadToDeg;
  return normalized(pose);
}

ViewSet viewset_neus36(double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("radius must be > 0");
  ViewSet set{"neus36", {}};
  for (double elevation : {-30.0, 0.0, 30.0})
    for (int k = 0; k < 12; ++k) set.poses.push_back({30.0 * k, elevation, radius, 0.0});
  return set;
}

ViewSet viewset_zero123pp(double reference_azimuth_deg, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("radius must be > 0");
  if (!std::isfinite(reference_azimuth_deg)) throw InvalidArgument("reference azimuth must be finite");
  ViewSet set{"zero123pp", {}};
  for (int k = 0; k < 6; ++k) {
    const double elevation = (k % 2 == 0) ? 20.0 : -10.0;
    set.poses.push_back({wrap(reference_azimuth_deg + 30.0 + 60.0 * k, 0.0, 360.0), elevation, radius, 0.0});
  }
  return set;
}

ViewSet viewset_enhanced42(double reference_azimuth_deg, double radius) {
  ViewSet set = viewset_zero123pp(reference_azimuth_deg, radius);
  set.name = "enhanced42";
  for (const auto& p : viewset_neus36(radius).poses) set.poses.push_back(p);
  return set;
}

ViewSet make_viewset(const std::string& name, double reference_azimuth_deg, double radius) {
  if (name == "neus36") return viewset_neus36(radius);
  if (name == "zero123pp") return viewset_zero123pp(reference_azimuth_deg, radius);
  if (name == "enhanced42") return viewset_enhanced42(reference_azimuth_deg, radius);
  throw InvalidArgument("unknown view set '" + name + "' (expected neus36, zero123pp or enhanced42)");
}

nlohmann::json to_json(const SphericalPose& pose) {
  return {{"azimuth_deg", pose.azimuth_deg},
          {"elevation_deg", pose.elevation_deg},
          {"radius", pose.radius},
          {"roll_deg", pose.roll_deg}};
}

SphericalPose pose_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("pose must be a JSON object");
  SphericalPose p;
  try {
    p.azimuth_deg = j.at("azimuth_deg").get<double>();
    p.elevation_deg = j.at("elevation_deg").get<double>();
    p.radius = j.at("radius").get<double>();
    p.roll_deg = j.value("roll_deg", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad pose: ") + e.what());
  }
  return normalized(p);
}

nlohmann::json to_json(const ViewSet& set) {
  nlohmann::json poses = nlohmann::json::array();
  for (const auto& p : set.poses) poses.push_back(to_json(p));
  return {{"name", set.name}, {"poses", poses}};
}

ViewSet viewset_from_json(const nlohmann::json& j) {
  ViewSet set;
  try {
    set.name = j.at("name").get<std::string>();
    for (const auto& p : j.at("poses")) set.poses.push_back(pose_from_json(p));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad view set: ") + e.what());
  }
  return set;
}

nlohmann::json matrices_json(const ViewSet& set) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : set.poses) {
    const CameraMatrix m = pose_to_matrix(p);
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2), m(r, 3)});
    out.push_back(rows);
  }
  return out;
}

}  // namespace occbench::poses
