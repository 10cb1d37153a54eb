#pragma once

#include <optional>
#include <vector>

#include "trifin/grasp.hpp"
#include "trifin/kinematics.hpp"

namespace trifin {

enum class SimEventKind { GraspAcquired, CubeDropped, SubgoalReached, GoalSwitched };
const char* to_string(SimEventKind kind);
SimEventKind sim_event_kind_from_string(const std::string& name);  // throws ConfigError

struct SimEvent {
  SimEventKind kind = SimEventKind::GraspAcquired;
  long step_index = 0;        ///< step during which the event fired
  double max_residual = 0.0;  ///< CubeDropped only: largest per-finger slip, m
};

/// Rigid attachment of the cube to the fingertips. The per-finger offsets
/// are the planned contact points (cube frame), so the slip residuals start
/// at the realized acquisition gaps and the cube centers into the grasp as
/// the fingertips settle onto their contacts.
struct Attachment {
  GraspSpec spec;
  std::array<Vec3, kNumFingers> offsets{};
};

struct WorldState {
  JointVector q = JointVector::Zero();
  JointVector dq = JointVector::Zero();
  JointVector last_command = JointVector::Zero();  ///< raw, pre-clamp
  CubeGeom cube;
  std::optional<Attachment> attachment;
  double cube_velocity_z = 0.0;  ///< m/s, used while the cube is free
  double t = 0.0;                ///< s
  long step_index = 0;           ///< completed steps

  bool attached() const { return attachment.has_value(); }
};

struct SimParams {
  double dt = 0.004;             ///< s (250 Hz)
  double joint_vel_limit = 4.0;  ///< rad/s, per joint
  double eps_contact = 0.008;    ///< attach tolerance, m
  double eps_slip = 0.02;        ///< detach threshold, m
  double gravity_z = -9.81;      ///< m/s^2, cube free fall
  double arena_radius = 0.195;   ///< m
  double floor_z = 0.0;          ///< m
  bool gravity_comp_enabled = true;
  double droop_gain = 0.5;  ///< rad/s per N*m of uncompensated gravity torque

  void validate() const;  // throws ConfigError
};

struct StepOutcome {
  std::vector<SimEvent> events;
  double max_slip_residual = 0.0;  ///< 0 while the cube is free
};

/// Advance one fixed explicit-Euler timestep: clamp the command per joint,
/// integrate joints inside their limits, carry or drop the attached cube
/// (mean-of-fingertips placement, slip residual check against eps_slip),
/// or free-fall it onto the floor. With gravity compensation enabled,
/// joint motion follows the clamped command exactly; otherwise
/// uncompensated gravity torque leaks in as a velocity bias of
/// droop_gain * gravity_torques. Single-threaded and deterministic.
StepOutcome sim_step(WorldState& world, const KinematicChain& chain,
                     const JointVector& vel_cmd, const SimParams& params);

/// Same step with an explicit feedforward torque: the velocity bias is
/// droop_gain * (gravity_torques + feedforward_torque), so a feedforward
/// of -gravity_torques makes motion gravity-neutral. Ignores
/// params.gravity_comp_enabled.
StepOutcome sim_step(WorldState& world, const KinematicChain& chain,
                     const JointVector& vel_cmd, const JointVector& feedforward_torque,
                     const SimParams& params);

/// Attach the cube when every assigned fingertip is within eps_contact of
/// its world contact point (strict: at eps_contact + 1e-6 nothing
/// happens). Returns the GraspAcquired event on success.
std::optional<SimEvent> try_attach(WorldState& world, const KinematicChain& chain,
                                   const GraspSpec& spec, const SimParams& params);

/// What a controller may see. The attachment flag is diagnostic-only.
struct Observation {
  JointVector q, dq, last_command;
  CubeGeom cube;
  bool attached = false;
};
Observation observe(const WorldState& world);

}  // namespace trifin
