#pragma once

#include <array>
#include <string>
#include <vector>

#include "trifin/kinematics.hpp"

namespace trifin {

enum class GraspKind { Triangle, ThreeJawChuck };

const char* to_string(GraspKind kind);
GraspKind grasp_kind_from_string(const std::string& name);  // throws ConfigError

/// Pair of opposite vertical cube faces used by the chuck grasp; the thumb
/// presses on the + face of the chosen axis.
enum class FacePair { X, Y };

/// Upright cube: free position and yaw, faces axis-aligned in cube frame.
struct CubeGeom {
  Vec3 position = Vec3::Zero();  ///< center, world, m
  double yaw = 0.0;              ///< rad
  double half_extent = 0.0325;   ///< m
};

struct Contact {
  Vec3 point = Vec3::Zero();          ///< cube frame, on a vertical face
  Vec3 inward_normal = Vec3::Zero();  ///< unit, cube frame, into the cube
};

struct GraspSpec {
  GraspKind kind = GraspKind::Triangle;
  std::array<Contact, kNumFingers> contacts{};
  /// finger_assignment[f] = index of the contact taken by finger f.
  std::array<int, kNumFingers> finger_assignment = {0, 1, 2};
};

/// Contacts at cube mid-height found by ray-casting from the center at
/// bearings 90 / 210 / 330 degrees (cube frame) onto the side faces; the
/// bearings are pairwise 120 degrees apart.
GraspSpec plan_triangle_grasp(const CubeGeom& cube);

/// Thumb at the center of the + face of `thumb_axis`, two fingers on the
/// - face at +-half_extent/2 along the other horizontal axis. The X
/// variant is the Y variant with x and y swapped.
GraspSpec plan_chuck_grasp(const CubeGeom& cube, FacePair thumb_axis);

/// Face pair whose thumb contact lies closest to any finger base; ties
/// pick X.
FacePair default_thumb_axis(const CubeGeom& cube, const KinematicChain& chain);

/// Minimum total fingertip travel assignment over all six permutations
/// (straight-line distance from the current tips to the world contacts);
/// ties pick the lexicographically smallest assignment array.
GraspSpec assign_fingers(GraspSpec spec, const CubeGeom& cube, const KinematicChain& chain,
                         const JointVector& q);

/// World contact point for each finger under the grasp's assignment.
std::array<Vec3, kNumFingers> world_contact_points(const GraspSpec& spec, const CubeGeom& cube);

/// World inward normal for each finger under the assignment.
std::array<Vec3, kNumFingers> world_inward_normals(const GraspSpec& spec, const CubeGeom& cube);

/// Approach targets: contacts displaced outward along their world outward
/// normals by `standoff` meters.
std::array<Vec3, kNumFingers> pregrasp_targets(const GraspSpec& spec, const CubeGeom& cube,
                                               double standoff);

struct FeasibilityReport {
  bool feasible = false;
  std::array<bool, kNumFingers> finger_reachable = {false, false, false};
  std::vector<std::string> reasons;  ///< one entry per unreachable finger
};

/// A grasp is feasible when every assigned finger can reach its world
/// contact point within joint limits.
FeasibilityReport grasp_feasible(const GraspSpec& spec, const CubeGeom& cube,
                                 const KinematicChain& chain, const JointVector& q);

/// Checks the structural contact invariants: each contact on exactly one
/// vertical face, inward normal unit and pointing into the cube, and the
/// assignment a permutation. Throws InputError on violation.
void validate_grasp(const GraspSpec& spec, double half_extent);

}  // namespace trifin
