#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

namespace occbench::poses {

/// Object-centric camera on a sphere around the origin. z is up; azimuth is
/// measured in the xy-plane from +x, counter-clockwise. Roll is the in-plane
/// rotation about the viewing axis.
struct SphericalPose {
  double azimuth_deg = 0.0;    // [0, 360)
  double elevation_deg = 0.0;  // [-90, 90]
  double radius = 1.0;         // > 0
  double roll_deg = 0.0;       // [-180, 180)

  friend bool operator==(const SphericalPose&, const SphericalPose&) = default;
};

/// Validates ranges and wraps azimuth into [0,360) and roll into [-180,180).
/// Throws InvalidArgument for elevation outside [-90,90] or radius <= 0.
SphericalPose normalized(SphericalPose pose);

using Vec3 = std::array<double, 3>;

/// 4x4 camera-to-world transform, row-major. Columns 0..2 of the rotation
/// block are the camera right, up and backward axes (the camera looks down
/// its local -z); column 3 is the camera position.
struct CameraMatrix {
  std::array<double, 16> m{};

  double operator()(int r, int c) const { return m[static_cast<size_t>(r) * 4 + c]; }
  double& operator()(int r, int c) { return m[static_cast<size_t>(r) * 4 + c]; }

  Vec3 column(int c) const { return {(*this)(0, c), (*this)(1, c), (*this)(2, c)}; }
  Vec3 position() const { return column(3); }
  Vec3 right() const { return column(0); }
  Vec3 up() const { return column(1); }
  Vec3 forward() const { return {-(*this)(0, 2), -(*this)(1, 2), -(*this)(2, 2)}; }
};

Vec3 spherical_to_cartesian(const SphericalPose& pose);

/// Look-at toward the origin with world up +z. At |elevation| = 90 the up
/// reference falls back to +x rotated by the azimuth.
CameraMatrix pose_to_matrix(const SphericalPose& pose);

/// Inverse of pose_to_matrix for elevation in (-90, 90).
SphericalPose matrix_to_pose(const CameraMatrix& matrix);

struct ViewSet {
  std::string name;
  std::vector<SphericalPose> poses;

  friend bool operator==(const ViewSet&, const ViewSet&) = default;
};

/// 12 azimuths every 30 degrees x elevations {-30, 0, 30}, elevation-major.
ViewSet viewset_neus36(double radius);

/// Six views at alternating absolute elevations 20/-10 with azimuths
/// reference + 30 + 60k.
ViewSet viewset_zero123pp(double reference_azimuth_deg, double radius);

/// zero123pp views first, then the 36-view grid.
ViewSet viewset_enhanced42(double reference_azimuth_deg, double radius);

/// Dispatches on "neus36" | "zero123pp" | "enhanced42".
ViewSet make_viewset(const std::string& name, double reference_azimuth_deg, double radius);

nlohmann::json to_json(const SphericalPose& pose);
SphericalPose pose_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ViewSet& set);
ViewSet viewset_from_json(const nlohmann::json& j);

/// Array of row-major 4x4 arrays, one per pose.
nlohmann::json matrices_json(const ViewSet& set);

}  // namespace occbench::poses
