#include "trifin/grasp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace trifin {

const char* to_string(GraspKind kind) {
  return kind == GraspKind::Triangle ? "triangle" : "chuck";
}

GraspKind grasp_kind_from_string(const std::string& name) {
  if (name == "triangle") return GraspKind::Triangle;
  if (name == "chuck") return GraspKind::ThreeJawChuck;
  throw ConfigError("unknown grasp kind '" + name + "' (expected triangle or chuck)");
}

namespace {

void check_cube(const CubeGeom& cube) {
  if (!cube.position.allFinite() || !std::isfinite(cube.yaw))
    throw InputError("cube pose is non-finite");
  if (!(cube.half_extent > 0.0)) throw InputError("cube half_extent must be positive");
}

/// First hit of the horizontal ray from the cube center at `bearing`
/// (cube frame) against the side planes |x| = h or |y| = h.
Contact side_face_contact(double bearing, double h) {
  const double cx = std::cos(bearing);
  const double sy = std::sin(bearing);
  const double inf = std::numeric_limits<double>::infinity();
  const double tx = std::abs(cx) > 0.0 ? h / std::abs(cx) : inf;
  const double ty = std::abs(sy) > 0.0 ? h / std::abs(sy) : inf;

  Contact c;
  if (tx < ty) {  // x face first
    c.point = {std::copysign(h, cx), sy * tx, 0.0};
    c.inward_normal = {-std::copysign(1.0, cx), 0.0, 0.0};
  } else {  // y face
    c.point = {cx * ty, std::copysign(h, sy), 0.0};
    c.inward_normal = {0.0, -std::copysign(1.0, sy), 0.0};
  }
  return c;
}

}  // namespace

GraspSpec plan_triangle_grasp(const CubeGeom& cube) {
  check_cube(cube);
  GraspSpec spec;
  spec.kind = GraspKind::Triangle;
  const double start = std::numbers::pi / 2.0;
  const double step = 2.0 * std::numbers::pi / 3.0;
  for (int k = 0; k < kNumFingers; ++k)
    spec.contacts[k] = side_face_contact(start + k * step, cube.half_extent);
  return spec;
}

GraspSpec plan_chuck_grasp(const CubeGeom& cube, FacePair thumb_axis) {
  check_cube(cube);
  const double h = cube.half_extent;
  GraspSpec spec;
  spec.kind = GraspKind::ThreeJawChuck;
  if (thumb_axis == FacePair::Y) {
    spec.contacts[0] = {{0.0, h, 0.0}, {0.0, -1.0, 0.0}};       // thumb
    spec.contacts[1] = {{h / 2.0, -h, 0.0}, {0.0, 1.0, 0.0}};   // + offset finger
    spec.contacts[2] = {{-h / 2.0, -h, 0.0}, {0.0, 1.0, 0.0}};  // - offset finger
  } else {
    spec.contacts[0] = {{h, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
    spec.contacts[1] = {{-h, h / 2.0, 0.0}, {1.0, 0.0, 0.0}};
    spec.contacts[2] = {{-h, -h / 2.0, 0.0}, {1.0, 0.0, 0.0}};
  }
  return spec;
}

FacePair default_thumb_axis(const CubeGeom& cube, const KinematicChain& chain) {
  check_cube(cube);
  const Mat3 R = yaw_rotation(cube.yaw);
  const double h = cube.half_extent;
  auto nearest_base = [&](const Vec3& thumb_local) {
    const Vec3 thumb_world = cube.position + R * thumb_local;
    double best = std::numeric_limits<double>::infinity();
    for (const FingerModel& finger : chain.fingers)
      best = std::min(best, (thumb_world - finger.base_position).norm());
    return best;
  };
  const double dx = nearest_base({h, 0.0, 0.0});
  const double dy = nearest_base({0.0, h, 0.0});
  return dx <= dy ? FacePair::X : FacePair::Y;
}

namespace {

std::array<Vec3, kNumFingers> contact_points_by_index(const GraspSpec& spec,
                                                      const CubeGeom& cube) {
  const Mat3 R = yaw_rotation(cube.yaw);
  std::array<Vec3, kNumFingers> pts;
  for (int c = 0; c < kNumFingers; ++c) pts[c] = cube.position + R * spec.contacts[c].point;
  return pts;
}

}  // namespace

GraspSpec assign_fingers(GraspSpec spec, const CubeGeom& cube, const KinematicChain& chain,
                         const JointVector& q) {
  check_cube(cube);
  const std::array<Vec3, kNumFingers> tips = forward_kinematics(chain, q).fingertips();
  const auto contacts = contact_points_by_index(spec, cube);

  // All six permutations in lexicographic order; strict improvement keeps
  // the earlier (lexicographically smaller) assignment on ties.
  static constexpr std::array<std::array<int, 3>, 6> kPerms = {{
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
  }};
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& perm : kPerms) {
    double cost = 0.0;
    for (int f = 0; f < kNumFingers; ++f) cost += (tips[f] - contacts[perm[f]]).norm();
    if (cost < best_cost) {
      best_cost = cost;
      spec.finger_assignment = perm;
    }
  }
  return spec;
}

std::array<Vec3, kNumFingers> world_contact_points(const GraspSpec& spec, const CubeGeom& cube) {
  check_cube(cube);
  const auto by_index = contact_points_by_index(spec, cube);
  std::array<Vec3, kNumFingers> out;
  for (int f = 0; f < kNumFingers; ++f) out[f] = by_index[spec.finger_assignment[f]];
  return out;
}

std::array<Vec3, kNumFingers> world_inward_normals(const GraspSpec& spec, const CubeGeom& cube) {
  check_cube(cube);
  const Mat3 R = yaw_rotation(cube.yaw);
  std::array<Vec3, kNumFingers> out;
  for (int f = 0; f < kNumFingers; ++f)
    out[f] = R * spec.contacts[spec.finger_assignment[f]].inward_normal;
  return out;
}

std::array<Vec3, kNumFingers> pregrasp_targets(const GraspSpec& spec, const CubeGeom& cube,
                                               double standoff) {
  if (!(standoff >= 0.0) || !std::isfinite(standoff))
    throw InputError("pregrasp standoff must be finite and >= 0");
  const auto contacts = world_contact_points(spec, cube);
  const auto inward = world_inward_normals(spec, cube);
  std::array<Vec3, kNumFingers> out;
  for (int f = 0; f < kNumFingers; ++f) out[f] = contacts[f] - standoff * inward[f];
  return out;
}

FeasibilityReport grasp_feasible(const GraspSpec& spec, const CubeGeom& cube,
                                 const KinematicChain& chain, const JointVector& q) {
  (void)q;  // reachability is configuration-independent; q kept for interface symmetry
  const auto contacts = world_contact_points(spec, cube);
  FeasibilityReport report;
  report.feasible = true;
  for (int f = 0; f < kNumFingers; ++f) {
    report.finger_reachable[f] = reachable(chain, f, contacts[f]);
    if (!report.finger_reachable[f]) {
      report.feasible = false;
      report.reasons.push_back("finger " + std::to_string(f) + " cannot reach contact (" +
                               std::to_string(contacts[f].x()) + ", " +
                               std::to_string(contacts[f].y()) + ", " +
                               std::to_string(contacts[f].z()) + ")");
    }
  }
  return report;
}

void validate_grasp(const GraspSpec& spec, double half_extent) {
  if (!(half_extent > 0.0)) throw InputError("validate_grasp: half_extent must be positive");
  const double tol = 1e-9;
  for (int c = 0; c < kNumFingers; ++c) {
    const Contact& contact = spec.contacts[c];
    const Vec3& p = contact.point;
    const bool on_x = std::abs(std::abs(p.x()) - half_extent) <= tol;
    const bool on_y = std::abs(std::abs(p.y()) - half_extent) <= tol;
    if (on_x == on_y)
      throw InputError("contact " + std::to_string(c) +
                       " must lie on exactly one vertical face");
    if (std::abs(p.x()) > half_extent + tol || std::abs(p.y()) > half_extent + tol ||
        std::abs(p.z()) > half_extent + tol)
      throw InputError("contact " + std::to_string(c) + " lies outside the cube");
    if (std::abs(contact.inward_normal.norm() - 1.0) > tol)
      throw InputError("contact " + std::to_string(c) + " normal is not unit length");
    const Vec3 outward_axis = on_x ? Vec3(std::copysign(1.0, p.x()), 0.0, 0.0)
                                   : Vec3(0.0, std::copysign(1.0, p.y()), 0.0);
    if (contact.inward_normal.dot(outward_axis) >= 0.0)
      throw InputError("contact " + std::to_string(c) + " normal does not point inward");
  }
  std::array<int, kNumFingers> sorted = spec.finger_assignment;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 3>{0, 1, 2})
    throw InputError("finger_assignment is not a permutation of {0,1,2}");
}

}  // namespace trifin
