#include "trifin/sim.hpp"

#include <cmath>

namespace trifin {

const char* to_string(SimEventKind kind) {
  switch (kind) {
    case SimEventKind::GraspAcquired: return "GraspAcquired";
    case SimEventKind::CubeDropped: return "CubeDropped";
    case SimEventKind::SubgoalReached: return "SubgoalReached";
    case SimEventKind::GoalSwitched: return "GoalSwitched";
  }
  return "?";
}

SimEventKind sim_event_kind_from_string(const std::string& name) {
  if (name == "GraspAcquired") return SimEventKind::GraspAcquired;
  if (name == "CubeDropped") return SimEventKind::CubeDropped;
  if (name == "SubgoalReached") return SimEventKind::SubgoalReached;
  if (name == "GoalSwitched") return SimEventKind::GoalSwitched;
  throw ConfigError("unknown event kind '" + name + "'");
}

void SimParams::validate() const {
  if (!(dt > 0.0)) throw ConfigError("sim: dt must be positive");
  if (!(joint_vel_limit > 0.0)) throw ConfigError("sim: joint_vel_limit must be positive");
  if (!(eps_contact > 0.0)) throw ConfigError("sim: eps_contact must be positive");
  if (!(eps_slip > eps_contact))
    throw ConfigError("sim: eps_slip must exceed eps_contact");
  if (!std::isfinite(gravity_z)) throw ConfigError("sim: non-finite gravity");
  if (!(arena_radius > 0.0)) throw ConfigError("sim: arena_radius must be positive");
  if (!std::isfinite(floor_z)) throw ConfigError("sim: non-finite floor height");
  if (!std::isfinite(droop_gain) || droop_gain < 0.0)
    throw ConfigError("sim: droop_gain must be finite and >= 0");
}

namespace {

void clamp_radius(Vec3& p, double max_r) {
  const double r = std::hypot(p.x(), p.y());
  if (r > max_r) {
    p.x() *= max_r / r;
    p.y() *= max_r / r;
  }
}

StepOutcome step_impl(WorldState& world, const KinematicChain& chain,
                      const JointVector& vel_cmd, const JointVector* droop_torque,
                      const SimParams& params) {
  if (!vel_cmd.allFinite()) throw InputError("sim_step: non-finite command");

  StepOutcome out;
  const long step = world.step_index;

  JointVector v =
      vel_cmd.cwiseMax(-params.joint_vel_limit).cwiseMin(params.joint_vel_limit);
  if (droop_torque != nullptr) v += params.droop_gain * (*droop_torque);

  const JointVector q_prev = world.q;
  world.q = clamp_to_limits(chain, q_prev + v * params.dt);
  world.dq = (world.q - q_prev) / params.dt;
  world.last_command = vel_cmd;

  const double rest_z = params.floor_z + world.cube.half_extent;
  if (world.attached()) {
    const FkResult fk = forward_kinematics(chain, world.q);
    const Mat3 R = yaw_rotation(world.cube.yaw);
    const Attachment& att = *world.attachment;

    std::array<Vec3, kNumFingers> world_offset;
    Vec3 mean = Vec3::Zero();
    for (int f = 0; f < kNumFingers; ++f) {
      world_offset[f] = R * att.offsets[f];
      mean += fk.finger[f].fingertip - world_offset[f];
    }
    mean /= static_cast<double>(kNumFingers);

    // The floor and arena wall constrain the cube even while held; pushing
    // against them shows up as slip residual like any other mismatch.
    Vec3 pos = mean;
    if (pos.z() < rest_z) pos.z() = rest_z;
    clamp_radius(pos, params.arena_radius + world.cube.half_extent);
    world.cube.position = pos;

    double max_residual = 0.0;
    for (int f = 0; f < kNumFingers; ++f) {
      const double r = (fk.finger[f].fingertip - (pos + world_offset[f])).norm();
      max_residual = std::max(max_residual, r);
    }
    out.max_slip_residual = max_residual;
    if (max_residual > params.eps_slip) {
      world.attachment.reset();
      world.cube_velocity_z = 0.0;
      out.events.push_back({SimEventKind::CubeDropped, step, max_residual});
    }
  } else {
    world.cube_velocity_z += params.gravity_z * params.dt;
    double z = world.cube.position.z() + world.cube_velocity_z * params.dt;
    if (z <= rest_z) {
      z = rest_z;
      world.cube_velocity_z = 0.0;
    }
    world.cube.position.z() = z;
  }

  world.t += params.dt;
  world.step_index += 1;
  return out;
}

}  // namespace

StepOutcome sim_step(WorldState& world, const KinematicChain& chain,
                     const JointVector& vel_cmd, const SimParams& params) {
  if (params.gravity_comp_enabled) return step_impl(world, chain, vel_cmd, nullptr, params);
  const JointVector residual = gravity_torques(chain, world.q);
  return step_impl(world, chain, vel_cmd, &residual, params);
}

StepOutcome sim_step(WorldState& world, const KinematicChain& chain,
                     const JointVector& vel_cmd, const JointVector& feedforward_torque,
                     const SimParams& params) {
  if (!feedforward_torque.allFinite()) throw InputError("sim_step: non-finite feedforward");
  const JointVector residual = gravity_torques(chain, world.q) + feedforward_torque;
  return step_impl(world, chain, vel_cmd, &residual, params);
}

std::optional<SimEvent> try_attach(WorldState& world, const KinematicChain& chain,
                                   const GraspSpec& spec, const SimParams& params) {
  if (world.attached()) return std::nullopt;
  const auto contacts = world_contact_points(spec, world.cube);
  const FkResult fk = forward_kinematics(chain, world.q);
  for (int f = 0; f < kNumFingers; ++f)
    if ((fk.finger[f].fingertip - contacts[f]).norm() > params.eps_contact)
      return std::nullopt;

  Attachment att;
  att.spec = spec;
  for (int f = 0; f < kNumFingers; ++f)
    att.offsets[f] = spec.contacts[spec.finger_assignment[f]].point;
  world.attachment = att;
  world.cube_velocity_z = 0.0;
  return SimEvent{SimEventKind::GraspAcquired, world.step_index, 0.0};
}

Observation observe(const WorldState& world) {
  Observation obs;
  obs.q = world.q;
  obs.dq = world.dq;
  obs.last_command = world.last_command;
  obs.cube = world.cube;
  obs.attached = world.attached();
  return obs;
}

}  // namespace trifin
