#include "trifin/control.hpp"

#include <cmath>

namespace trifin {

void ControllerGains::validate() const {
  if (!kp.allFinite() || !ki.allFinite() || !kd.allFinite())
    throw ConfigError("gains: non-finite gain vector");
  if ((kp.array() < 0.0).any() || (ki.array() < 0.0).any() || (kd.array() < 0.0).any())
    throw ConfigError("gains: kp/ki/kd must be non-negative");
  if (!(integral_clamp > 0.0)) throw ConfigError("gains: integral_clamp must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("gains: lambda must be finite and >= 0");
  if (!(max_cart_speed > 0.0)) throw ConfigError("gains: max_cart_speed must be positive");
}

std::pair<Vec3, PidState> pid_step(const Vec3& error, const PidState& state,
                                   const ControllerGains& gains, double dt) {
  if (!error.allFinite()) throw InputError("pid_step: non-finite error");
  if (!(dt > 0.0)) throw InputError("pid_step: dt must be positive");

  PidState next = state;
  next.integral = (state.integral + error * dt)
                      .cwiseMax(-gains.integral_clamp)
                      .cwiseMin(gains.integral_clamp);
  const Vec3 derivative =
      state.initialized ? Vec3(((error - state.prev_error) / dt)) : Vec3(Vec3::Zero());

  Vec3 v = gains.kp.cwiseProduct(error) + gains.ki.cwiseProduct(next.integral) +
           gains.kd.cwiseProduct(derivative);
  const double speed = v.norm();
  if (speed > gains.max_cart_speed) v *= gains.max_cart_speed / speed;

  next.prev_error = error;
  next.initialized = true;
  return {v, next};
}

CpcResult cpc_command(const KinematicChain& chain, const JointVector& q,
                      const std::array<Vec3, kNumFingers>& fingertip_targets,
                      const std::array<PidState, kNumFingers>& pid_states,
                      const ControllerGains& gains, double dt) {
  for (const Vec3& target : fingertip_targets)
    if (!target.allFinite()) throw InputError("cpc_command: non-finite target");

  const FkResult fk = forward_kinematics(chain, q);
  CpcResult out;
  for (int f = 0; f < kNumFingers; ++f) {
    const Vec3 error = fingertip_targets[f] - fk.finger[f].fingertip;
    const double prev_norm =
        pid_states[f].initialized ? pid_states[f].prev_error.norm() : error.norm();
    auto [v, next_state] = pid_step(error, pid_states[f], gains, dt);
    const Mat3 J = fingertip_jacobian(fk.finger[f]);
    out.joint_velocity.segment<3>(3 * f) = damped_ik(J, v, gains.lambda);
    out.pid_states[f] = next_state;
    out.diagnostics[f] = {error.norm(), v.norm(), std::abs(error.norm() - prev_norm)};
  }
  return out;
}

JointVector gravity_comp_torque(const KinematicChain& chain, const JointVector& q) {
  return -gravity_torques(chain, q);
}

}  // namespace trifin
