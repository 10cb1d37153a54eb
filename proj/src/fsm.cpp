#include "trifin/fsm.hpp"

#include <algorithm>
#include <cmath>

#include "trifin/control.hpp"

namespace trifin {

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::MoveToPregrasp: return "MoveToPregrasp";
    case Phase::CloseGrasp: return "CloseGrasp";
    case Phase::MoveToGoal: return "MoveToGoal";
    case Phase::Hold: return "Hold";
    case Phase::Recover: return "Recover";
    case Phase::Done: return "Done";
  }
  return "?";
}

Phase phase_from_string(const std::string& name) {
  for (Phase p : {Phase::MoveToPregrasp, Phase::CloseGrasp, Phase::MoveToGoal, Phase::Hold,
                  Phase::Recover, Phase::Done})
    if (name == to_string(p)) return p;
  throw ConfigError("unknown phase '" + name + "'");
}

void EpisodeConfig::validate() const {
  run.validate();
  trajectory.validate(run.sim.arena_radius, run.sim.floor_z);
}

namespace {

long episode_horizon(const EpisodeConfig& config) {
  return std::llround(config.run.episode.duration / config.run.sim.dt);
}

bool has_event(const std::vector<SimEvent>& events, SimEventKind kind) {
  return std::any_of(events.begin(), events.end(),
                     [kind](const SimEvent& e) { return e.kind == kind; });
}

}  // namespace

Phase transition(Phase phase, const WorldState& world, const GraspSpec& spec,
                 const WaypointPlan& plan, const std::vector<SimEvent>& events,
                 const EpisodeConfig& config) {
  if (world.step_index >= episode_horizon(config) - 1) return Phase::Done;

  switch (phase) {
    case Phase::MoveToPregrasp: {
      const auto targets =
          pregrasp_targets(spec, world.cube, config.run.episode.standoff);
      const auto tips = forward_kinematics(config.run.chain, world.q).fingertips();
      const double gate = 2.0 * config.run.sim.eps_contact;
      for (int f = 0; f < kNumFingers; ++f)
        if ((tips[f] - targets[f]).norm() > gate) return Phase::MoveToPregrasp;
      return Phase::CloseGrasp;
    }
    case Phase::CloseGrasp:
      return has_event(events, SimEventKind::GraspAcquired) ? Phase::MoveToGoal
                                                            : Phase::CloseGrasp;
    case Phase::MoveToGoal:
      if (has_event(events, SimEventKind::CubeDropped)) return Phase::Recover;
      if (plan.exhausted() &&
          (world.cube.position - plan.source_goal).norm() <= config.run.episode.subgoal_tol)
        return Phase::Hold;
      return Phase::MoveToGoal;
    case Phase::Hold:
      if (has_event(events, SimEventKind::CubeDropped)) return Phase::Recover;
      if (has_event(events, SimEventKind::GoalSwitched)) return Phase::MoveToGoal;
      return Phase::Hold;
    case Phase::Recover:
      return Phase::MoveToPregrasp;
    case Phase::Done:
      return Phase::Done;
  }
  return phase;
}

std::array<Vec3, kNumFingers> fingertip_targets_for(Phase phase, const WorldState& world,
                                                    const KinematicChain& chain,
                                                    const GraspSpec& spec,
                                                    const WaypointPlan& plan, double standoff) {
  switch (phase) {
    case Phase::MoveToPregrasp:
      return pregrasp_targets(spec, world.cube, standoff);
    case Phase::CloseGrasp:
      return world_contact_points(spec, world.cube);
    case Phase::MoveToGoal:
    case Phase::Hold: {
      CubeGeom shifted = world.cube;
      shifted.position = plan.active_subgoal();
      return world_contact_points(spec, shifted);
    }
    case Phase::Recover:
    case Phase::Done:
      return forward_kinematics(chain, world.q).fingertips();
  }
  return forward_kinematics(chain, world.q).fingertips();
}

GraspSpec plan_grasp(const EpisodeConfig& config, const WorldState& world) {
  const KinematicChain& chain = config.run.chain;
  GraspKind kind = config.run.episode.grasp;

  GraspSpec spec;
  if (kind == GraspKind::ThreeJawChuck) {
    spec = plan_chuck_grasp(world.cube, default_thumb_axis(world.cube, chain));
    spec = assign_fingers(spec, world.cube, chain, world.q);
    if (config.run.episode.perimeter_fallback_triangle &&
        !grasp_feasible(spec, world.cube, chain, world.q).feasible)
      kind = GraspKind::Triangle;  // chuck unreachable here; fall back
  }
  if (kind == GraspKind::Triangle) {
    spec = plan_triangle_grasp(world.cube);
    spec = assign_fingers(spec, world.cube, chain, world.q);
  }
  return spec;
}

EpisodeLog run_episode(const EpisodeConfig& config) {
  config.validate();
  const RunConfig& run = config.run;
  const KinematicChain& chain = run.chain;
  const SimParams& sim = run.sim;
  const long horizon = episode_horizon(config);
  if (horizon < 1) throw ConfigError("episode: duration shorter than one step");

  WorldState world;
  world.q = clamp_to_limits(chain, run.home_q);
  world.cube = run.cube_start;

  EpisodeLog log;
  log.seed = config.seed;
  log.config_hash = config_hash(run);
  log.grasp = run.episode.grasp;
  log.interp_n = run.episode.interp_n;
  log.dt = sim.dt;
  log.duration = run.episode.duration;
  log.records.reserve(horizon);

  Phase phase = Phase::MoveToPregrasp;
  GraspSpec spec = plan_grasp(config, world);
  int goal_idx = config.trajectory.active_index(0.0);
  WaypointPlan plan =
      make_plan(world.cube.position, config.trajectory.entries[goal_idx].goal,
                run.episode.interp_n);
  std::array<PidState, kNumFingers> pid{};
  std::vector<SimEvent> pending;  // sim events carried into the next step's decisions

  for (long k = 0; k < horizon; ++k) {
    std::vector<SimEvent> decision_events = std::move(pending);
    pending.clear();
    std::vector<SimEvent> record_events;

    // Grasp acquisition check happens at the top of the step so the event
    // is consumed by this step's transition and logged under this step.
    if (phase == Phase::CloseGrasp && !world.attached()) {
      if (auto acquired = try_attach(world, chain, spec, sim)) {
        decision_events.push_back(*acquired);
        record_events.push_back(*acquired);
      }
    }

    // Goal activation by episode time.
    const int next_goal = config.trajectory.active_index(world.t);
    if (next_goal != goal_idx) {
      goal_idx = next_goal;
      const SimEvent switched{SimEventKind::GoalSwitched, world.step_index, 0.0};
      decision_events.push_back(switched);
      record_events.push_back(switched);
      plan = make_plan(world.cube.position, config.trajectory.entries[goal_idx].goal,
                       run.episode.interp_n);
    }

    // Subgoal progress only while pursuing.
    if (phase == Phase::MoveToGoal) {
      const AdvanceOutcome adv = advance(plan, world.cube.position, run.episode.subgoal_tol,
                                         run.episode.subgoal_timeout);
      if (adv.advanced && adv.by_proximity) {
        const SimEvent reached{SimEventKind::SubgoalReached, world.step_index, 0.0};
        decision_events.push_back(reached);
        record_events.push_back(reached);
      }
    }

    const Phase next_phase = transition(phase, world, spec, plan, decision_events, config);
    if (next_phase != phase) {
      if (next_phase == Phase::Recover) {
        // Replan the grasp where the cube actually is now.
        spec = plan_grasp(config, world);
      } else if (next_phase == Phase::MoveToGoal && phase == Phase::CloseGrasp) {
        // Fresh plan from the grasped cube's position.
        plan = make_plan(world.cube.position, config.trajectory.entries[goal_idx].goal,
                         run.episode.interp_n);
      }
      phase = next_phase;
    }

    const auto targets =
        fingertip_targets_for(phase, world, chain, spec, plan, run.episode.standoff);

    StepRecord record;
    record.step_index = world.step_index;
    record.t = world.t;
    record.phase = phase;
    record.active_goal = config.trajectory.entries[goal_idx].goal;
    record.active_subgoal = plan.active_subgoal();

    JointVector cmd = JointVector::Zero();
    if (phase != Phase::Done) {
      const CpcResult control = cpc_command(chain, world.q, targets, pid, run.gains, sim.dt);
      cmd = control.joint_velocity;
      pid = control.pid_states;
      for (int f = 0; f < kNumFingers; ++f) {
        record.finger_error_norm[f] = control.diagnostics[f].error_norm;
        record.error_jump_max = std::max(record.error_jump_max, control.diagnostics[f].error_jump);
      }
    } else {
      const auto tips = forward_kinematics(chain, world.q).fingertips();
      for (int f = 0; f < kNumFingers; ++f)
        record.finger_error_norm[f] = (targets[f] - tips[f]).norm();
    }

    StepOutcome outcome = sim_step(world, chain, cmd, sim);
    for (const SimEvent& e : outcome.events) {
      record_events.push_back(e);
      pending.push_back(e);
    }

    record.cube_position = world.cube.position;
    record.reward = reward(world.cube.position, record.active_goal, run.reward);
    record.slip_residual_max = outcome.max_slip_residual;
    record.attached = world.attached();
    record.events = std::move(record_events);
    log.records.push_back(std::move(record));
  }
  return log;
}

}  // namespace trifin
