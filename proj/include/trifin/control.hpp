#pragma once

#include <array>
#include <utility>

#include "trifin/kinematics.hpp"

namespace trifin {

struct ControllerGains {
  Vec3 kp = {30.0, 30.0, 30.0};  ///< 1/s
  Vec3 ki = {0.1, 0.1, 0.1};     ///< 1/s^2
  Vec3 kd = {0.2, 0.2, 0.2};     ///< dimensionless
  double integral_clamp = 0.05;  ///< per-axis |integral| bound, m*s
  double lambda = 0.01;          ///< IK damping
  double max_cart_speed = 0.5;   ///< commanded speed cap, m/s

  /// Throws ConfigError on negative gains, non-positive clamp/speed caps
  /// or negative lambda.
  void validate() const;
};

struct PidState {
  Vec3 integral = Vec3::Zero();    ///< accumulated error, m*s
  Vec3 prev_error = Vec3::Zero();  ///< m
  bool initialized = false;        ///< false until the first update
};

struct FingerDiagnostics {
  double error_norm = 0.0;       ///< m
  double commanded_speed = 0.0;  ///< post-clip |v|, m/s
  double error_jump = 0.0;       ///< | |e_t| - |e_{t-1}| |, zero on the first step
};
using ControlDiagnostics = std::array<FingerDiagnostics, kNumFingers>;

/// One PID update on a Cartesian position error. Update order: integrate
/// and clamp the integral per axis, differentiate the error (zero on the
/// first call), combine, then clip the output to max_cart_speed by norm
/// scaling. Throws InputError on non-finite error or dt <= 0.
std::pair<Vec3, PidState> pid_step(const Vec3& error, const PidState& state,
                                   const ControllerGains& gains, double dt);

struct CpcResult {
  JointVector joint_velocity = JointVector::Zero();
  std::array<PidState, kNumFingers> pid_states{};
  ControlDiagnostics diagnostics{};
};

/// Cartesian position control for all fingers: per finger, PID on the
/// fingertip error mapped through damped IK to joint velocities.
CpcResult cpc_command(const KinematicChain& chain, const JointVector& q,
                      const std::array<Vec3, kNumFingers>& fingertip_targets,
                      const std::array<PidState, kNumFingers>& pid_states,
                      const ControllerGains& gains, double dt);

/// Feedforward torque canceling gravity loading on the links; equals
/// -gravity_torques(chain, q). Under the simulator's dynamics option,
/// applying it makes free motion gravity-neutral.
JointVector gravity_comp_torque(const KinematicChain& chain, const JointVector& q);

}  // namespace trifin
