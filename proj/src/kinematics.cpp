#include "trifin/kinematics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace trifin {

namespace {

void check_finger_index(int finger) {
  if (finger < 0 || finger >= kNumFingers)
    throw InputError("finger index must be in [0, 2], got " + std::to_string(finger));
}

}  // namespace

void KinematicChain::validate() const {
  if (!gravity.allFinite()) throw ConfigError("chain: non-finite gravity vector");
  for (int f = 0; f < kNumFingers; ++f) {
    const FingerModel& finger = fingers[f];
    if (!finger.base_position.allFinite() || !std::isfinite(finger.base_yaw))
      throw ConfigError("chain: non-finite base pose on finger " + std::to_string(f));
    for (int j = 0; j < kJointsPerFinger; ++j) {
      const JointModel& joint = finger.joints[j];
      const std::string where = "finger " + std::to_string(f) + " joint " + std::to_string(j);
      if (!joint.axis.allFinite() || !joint.offset.allFinite() ||
          !joint.link_com_offset.allFinite() || !std::isfinite(joint.limit_lo) ||
          !std::isfinite(joint.limit_hi) || !std::isfinite(joint.link_mass))
        throw ConfigError("chain: non-finite value at " + where);
      if (std::abs(joint.axis.norm() - 1.0) > 1e-9)
        throw ConfigError("chain: joint axis must be unit length at " + where);
      if (joint.limit_lo > joint.limit_hi)
        throw ConfigError("chain: inverted joint limits at " + where);
      if (joint.link_mass < 0.0)
        throw ConfigError("chain: negative link mass at " + where);
    }
  }
}

JointVector KinematicChain::limits_lo() const {
  JointVector lo;
  for (int f = 0; f < kNumFingers; ++f)
    for (int j = 0; j < kJointsPerFinger; ++j) lo[3 * f + j] = fingers[f].joints[j].limit_lo;
  return lo;
}

JointVector KinematicChain::limits_hi() const {
  JointVector hi;
  for (int f = 0; f < kNumFingers; ++f)
    for (int j = 0; j < kJointsPerFinger; ++j) hi[3 * f + j] = fingers[f].joints[j].limit_hi;
  return hi;
}

JointVector clamp_to_limits(const KinematicChain& chain, const JointVector& q) {
  return q.cwiseMax(chain.limits_lo()).cwiseMin(chain.limits_hi());
}

KinematicChain default_chain() {
  constexpr double base_radius = 0.18;
  constexpr double base_height = 0.30;
  constexpr double link0_tilt = 50.0 * std::numbers::pi / 180.0;  // down-slope of link 0

  KinematicChain chain;
  chain.gravity = {0.0, 0.0, -9.81};
  for (int f = 0; f < kNumFingers; ++f) {
    const double bearing = std::numbers::pi / 2.0 + f * 2.0 * std::numbers::pi / 3.0;
    FingerModel& finger = chain.fingers[f];
    finger.base_position = {base_radius * std::cos(bearing), base_radius * std::sin(bearing),
                            base_height};
    finger.base_yaw = bearing + std::numbers::pi;  // local +x points at the arena center

    // Joint 0 yaws the whole finger about the vertical; its link slopes
    // down toward the center. Joints 1 and 2 pitch about the local y axis
    // (positive pitch lowers the tip).
    JointModel& j0 = finger.joints[0];
    j0.axis = Vec3::UnitZ();
    j0.offset = {0.16 * std::cos(link0_tilt), 0.0, -0.16 * std::sin(link0_tilt)};
    j0.limit_lo = -2.0;
    j0.limit_hi = 2.0;
    j0.link_mass = 0.3;
    j0.link_com_offset = j0.offset / 2.0;

    JointModel& j1 = finger.joints[1];
    j1.axis = Vec3::UnitY();
    j1.offset = {0.16, 0.0, 0.0};
    j1.limit_lo = -0.6;
    j1.limit_hi = 1.9;
    j1.link_mass = 0.2;
    j1.link_com_offset = j1.offset / 2.0;

    JointModel& j2 = finger.joints[2];
    j2.axis = Vec3::UnitY();
    j2.offset = {0.14, 0.0, 0.0};
    j2.limit_lo = -0.6;
    j2.limit_hi = 2.9;
    j2.link_mass = 0.1;
    j2.link_com_offset = j2.offset / 2.0;
  }
  return chain;
}

std::array<Vec3, kNumFingers> FkResult::fingertips() const {
  return {finger[0].fingertip, finger[1].fingertip, finger[2].fingertip};
}

FingerFrames finger_forward_kinematics(const FingerModel& finger, const Vec3& q) {
  if (!q.allFinite()) throw InputError("forward kinematics: non-finite joint angles");
  FingerFrames out;
  Mat3 R = yaw_rotation(finger.base_yaw);
  Vec3 p = finger.base_position;
  for (int j = 0; j < kJointsPerFinger; ++j) {
    const JointModel& joint = finger.joints[j];
    out.joint_origin[j] = p;
    out.joint_axis[j] = R * joint.axis;
    R = R * Eigen::AngleAxisd(q[j], joint.axis).toRotationMatrix();
    out.link_com[j] = p + R * joint.link_com_offset;
    p = p + R * joint.offset;
  }
  out.fingertip = p;
  return out;
}

FkResult forward_kinematics(const KinematicChain& chain, const JointVector& q) {
  if (!q.allFinite()) throw InputError("forward kinematics: non-finite joint angles");
  FkResult out;
  for (int f = 0; f < kNumFingers; ++f)
    out.finger[f] = finger_forward_kinematics(chain.fingers[f], q.segment<3>(3 * f));
  return out;
}

Mat3 fingertip_jacobian(const FingerFrames& frames) {
  Mat3 J;
  for (int j = 0; j < kJointsPerFinger; ++j)
    J.col(j) = frames.joint_axis[j].cross(frames.fingertip - frames.joint_origin[j]);
  return J;
}

Mat3 fingertip_jacobian(const KinematicChain& chain, const JointVector& q, int finger) {
  check_finger_index(finger);
  if (!q.allFinite()) throw InputError("jacobian: non-finite joint angles");
  return fingertip_jacobian(
      finger_forward_kinematics(chain.fingers[finger], q.segment<3>(3 * finger)));
}

Vec3 damped_ik(const Mat3& J, const Vec3& xdot, double lambda) {
  if (!J.allFinite() || !xdot.allFinite() || !std::isfinite(lambda))
    throw InputError("damped_ik: non-finite input");
  if (lambda < 0.0) throw InputError("damped_ik: lambda must be >= 0");

  if (lambda == 0.0) {
    // Exact solve requested: refuse near-singular J J^T rather than return
    // an exploding velocity. cond(J J^T) = (smax / smin)^2.
    Eigen::JacobiSVD<Mat3> svd(J);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(2);
    if (!(smin > 0.0) || (smax / smin) * (smax / smin) > 1e12)
      throw SingularityError("damped_ik: J J^T is singular and lambda = 0");
  }
  const Mat3 A = J * J.transpose() + lambda * Mat3::Identity();
  return J.transpose() * A.ldlt().solve(xdot);
}

JointVector gravity_torques(const KinematicChain& chain, const JointVector& q) {
  if (!q.allFinite()) throw InputError("gravity_torques: non-finite joint angles");
  JointVector tau = JointVector::Zero();
  for (int f = 0; f < kNumFingers; ++f) {
    const FingerFrames frames =
        finger_forward_kinematics(chain.fingers[f], q.segment<3>(3 * f));
    for (int j = 0; j < kJointsPerFinger; ++j) {
      double s = 0.0;
      for (int k = j; k < kJointsPerFinger; ++k) {
        const Vec3 arm = frames.link_com[k] - frames.joint_origin[j];
        const Vec3 force = chain.fingers[f].joints[k].link_mass * chain.gravity;
        s += frames.joint_axis[j].cross(arm).dot(force);
      }
      tau[3 * f + j] = s;
    }
  }
  return tau;
}

double max_reach(const KinematicChain& chain, int finger) {
  check_finger_index(finger);
  double reach = 0.0;
  for (const JointModel& joint : chain.fingers[finger].joints) reach += joint.offset.norm();
  return reach;
}

namespace {

constexpr double kReachTol = 1e-3;    // m
constexpr int kGridPerJoint = 10;     // 10^3 seed grid over the limit box
constexpr int kRefineSeeds = 5;
constexpr int kRefineIters = 60;
constexpr double kRefineLambda = 1e-2;
constexpr double kMaxJointStep = 0.3;  // rad per refinement iteration

}  // namespace

bool reachable(const KinematicChain& chain, int finger, const Vec3& point) {
  check_finger_index(finger);
  if (!point.allFinite()) throw InputError("reachable: non-finite point");
  const FingerModel& model = chain.fingers[finger];
  if ((point - model.base_position).norm() > max_reach(chain, finger)) return false;

  Vec3 lo, hi;
  for (int j = 0; j < kJointsPerFinger; ++j) {
    lo[j] = model.joints[j].limit_lo;
    hi[j] = model.joints[j].limit_hi;
  }

  // Rank a fixed grid of cell centers by tip distance; keep the best seeds.
  struct Seed {
    double err;
    Vec3 q;
  };
  std::vector<Seed> best;
  best.reserve(kRefineSeeds + 1);
  for (int a = 0; a < kGridPerJoint; ++a) {
    for (int b = 0; b < kGridPerJoint; ++b) {
      for (int c = 0; c < kGridPerJoint; ++c) {
        Vec3 q;
        q[0] = lo[0] + (a + 0.5) / kGridPerJoint * (hi[0] - lo[0]);
        q[1] = lo[1] + (b + 0.5) / kGridPerJoint * (hi[1] - lo[1]);
        q[2] = lo[2] + (c + 0.5) / kGridPerJoint * (hi[2] - lo[2]);
        const double err = (finger_forward_kinematics(model, q).fingertip - point).norm();
        if (best.size() < kRefineSeeds || err < best.back().err) {
          best.push_back({err, q});
          std::sort(best.begin(), best.end(),
                    [](const Seed& x, const Seed& y) { return x.err < y.err; });
          if (best.size() > kRefineSeeds) best.pop_back();
        }
      }
    }
  }

  for (const Seed& seed : best) {
    if (seed.err <= kReachTol) return true;
    Vec3 q = seed.q;
    for (int it = 0; it < kRefineIters; ++it) {
      const FingerFrames frames = finger_forward_kinematics(model, q);
      const Vec3 e = point - frames.fingertip;
      if (e.norm() <= kReachTol) return true;
      Vec3 dq = damped_ik(fingertip_jacobian(frames), e, kRefineLambda);
      dq = dq.cwiseMax(-kMaxJointStep).cwiseMin(kMaxJointStep);
      q = (q + dq).cwiseMax(lo).cwiseMin(hi);
    }
    if ((finger_forward_kinematics(model, q).fingertip - point).norm() <= kReachTol) return true;
  }
  return false;
}

}  // namespace trifin
