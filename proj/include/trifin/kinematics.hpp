#pragma once

#include <array>

#include "trifin/errors.hpp"
#include "trifin/types.hpp"

namespace trifin {

/// One revolute joint plus the link rigidly attached to it. The link runs
/// from the joint origin to `offset` (expressed in the joint's rotated
/// frame); the next joint -- or the fingertip -- sits at its far end.
struct JointModel {
  Vec3 axis = Vec3::UnitZ();   ///< rotation axis, unit length, parent frame
  Vec3 offset = Vec3::Zero();  ///< link translation to the child, m
  double limit_lo = -3.2;      ///< rad
  double limit_hi = 3.2;       ///< rad
  double link_mass = 0.0;      ///< kg
  Vec3 link_com_offset = Vec3::Zero();  ///< joint origin -> link COM, rotated frame
};

struct FingerModel {
  Vec3 base_position = Vec3::Zero();  ///< world, m
  double base_yaw = 0.0;              ///< mount rotation about world z, rad
  std::array<JointModel, kJointsPerFinger> joints{};
};

/// Geometry and mass model of the three-finger manipulator.
struct KinematicChain {
  std::array<FingerModel, kNumFingers> fingers{};
  Vec3 gravity = {0.0, 0.0, -9.81};  ///< m/s^2

  /// Throws ConfigError on non-unit joint axes, inverted limit pairs,
  /// negative link masses or non-finite entries.
  void validate() const;

  JointVector limits_lo() const;
  JointVector limits_hi() const;
};

/// Clamp a joint vector into the chain's limit box.
JointVector clamp_to_limits(const KinematicChain& chain, const JointVector& q);

/// Tabletop default: bases 120 degrees apart on a 0.18 m circle facing the
/// center, three links of 0.16 / 0.16 / 0.14 m per finger with masses
/// 0.3 / 0.2 / 0.1 kg and COMs at the link midpoints.
KinematicChain default_chain();

/// World-frame pose data for one finger at a given configuration.
struct FingerFrames {
  std::array<Vec3, kJointsPerFinger> joint_origin;
  std::array<Vec3, kJointsPerFinger> joint_axis;  ///< unit, world
  std::array<Vec3, kJointsPerFinger> link_com;
  Vec3 fingertip;
};

struct FkResult {
  std::array<FingerFrames, kNumFingers> finger;
  std::array<Vec3, kNumFingers> fingertips() const;
};

/// Forward kinematics by rigid-transform composition down each finger.
/// Throws InputError on non-finite q.
FkResult forward_kinematics(const KinematicChain& chain, const JointVector& q);

/// FK for a single finger given that finger's three joint angles.
FingerFrames finger_forward_kinematics(const FingerModel& finger, const Vec3& q);

/// 3x3 positional Jacobian of one fingertip w.r.t. that finger's joint
/// angles: column j = axis_j x (tip - origin_j), all in world frame.
Mat3 fingertip_jacobian(const KinematicChain& chain, const JointVector& q, int finger);

/// Same Jacobian from precomputed frames.
Mat3 fingertip_jacobian(const FingerFrames& frames);

/// Damped pseudoinverse velocity IK: qdot = J^T (J J^T + lambda I)^-1 xdot.
/// lambda = 0 demands an exact solve; a singular J J^T (condition estimate
/// above 1e12) then raises SingularityError instead of regularizing
/// silently. Negative lambda or non-finite input raises InputError.
Vec3 damped_ik(const Mat3& J, const Vec3& xdot, double lambda);

/// Joint torques exerted by gravity on the links, N*m. Each joint feels
/// every link at or beyond it; applying the negation cancels the load.
JointVector gravity_torques(const KinematicChain& chain, const JointVector& q);

/// Sum of link lengths of one finger.
double max_reach(const KinematicChain& chain, int finger);

/// True when the finger can place its tip at `point` (within 1 mm) inside
/// joint limits. Cheap reject outside the reach sphere, then damped-IK
/// refinement seeded from a fixed 10x10x10 grid over the limit box; fully
/// deterministic.
bool reachable(const KinematicChain& chain, int finger, const Vec3& point);

}  // namespace trifin
