#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace trifin {

inline constexpr int kNumFingers = 3;
inline constexpr int kJointsPerFinger = 3;
inline constexpr int kNumJoints = kNumFingers * kJointsPerFinger;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Joint-space quantity (positions, velocities or torques), finger-major:
/// entries [3f, 3f+2] belong to finger f.
using JointVector = Eigen::Matrix<double, kNumJoints, 1>;

/// Rotation about the world vertical axis.
inline Mat3 yaw_rotation(double yaw) {
  return Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
}

}  // namespace trifin
