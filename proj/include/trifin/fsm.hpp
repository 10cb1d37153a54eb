#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trifin/config.hpp"
#include "trifin/reward.hpp"
#include "trifin/sim.hpp"
#include "trifin/trajectory.hpp"

namespace trifin {

enum class Phase { MoveToPregrasp, CloseGrasp, MoveToGoal, Hold, Recover, Done };
const char* to_string(Phase phase);
Phase phase_from_string(const std::string& name);  // throws ConfigError

/// Full description of one episode.
struct EpisodeConfig {
  RunConfig run;
  std::uint64_t seed = 0;
  GoalTrajectory trajectory;

  void validate() const;  // throws ConfigError
};

/// One logged control step. `t` is the time at which the step's command
/// was issued; cube position and reward reflect the post-step state.
struct StepRecord {
  long step_index = 0;
  double t = 0.0;
  Phase phase = Phase::MoveToPregrasp;
  Vec3 cube_position = Vec3::Zero();
  Vec3 active_goal = Vec3::Zero();
  Vec3 active_subgoal = Vec3::Zero();
  double reward = 0.0;
  std::array<double, kNumFingers> finger_error_norm = {0.0, 0.0, 0.0};
  double slip_residual_max = 0.0;
  double error_jump_max = 0.0;  ///< max over fingers of the controller's error jump
  bool attached = false;
  std::vector<SimEvent> events;  ///< events fired during this step
};

struct EpisodeLog {
  std::uint64_t seed = 0;
  std::string config_hash;
  GraspKind grasp = GraspKind::Triangle;
  int interp_n = 1;
  double dt = 0.004;
  double duration = 0.0;
  std::vector<StepRecord> records;
};

/// Phase successor for one control step. Total on (phase, events); rows in
/// priority order:
///
///   any phase         -> Done          entering the final step of the episode
///   MoveToPregrasp    -> CloseGrasp    all fingertips within 2*eps_contact
///                                      of their pregrasp targets
///   CloseGrasp        -> MoveToGoal    on GraspAcquired
///   MoveToGoal, Hold  -> Recover       on CubeDropped
///   MoveToGoal        -> Hold          plan exhausted and cube within
///                                      subgoal_tol of the goal
///   Hold              -> MoveToGoal    on GoalSwitched
///   Recover           -> MoveToPregrasp  (always, after its single step)
///   otherwise         -> unchanged
Phase transition(Phase phase, const WorldState& world, const GraspSpec& spec,
                 const WaypointPlan& plan, const std::vector<SimEvent>& events,
                 const EpisodeConfig& config);

/// Fingertip targets per phase: pregrasp standoff points, grasp contacts,
/// contacts rigidly shifted to the active subgoal (pursuit and hold), or
/// the current fingertips (recover, done).
std::array<Vec3, kNumFingers> fingertip_targets_for(Phase phase, const WorldState& world,
                                                    const KinematicChain& chain,
                                                    const GraspSpec& spec,
                                                    const WaypointPlan& plan, double standoff);

/// Plan a grasp of the configured kind at the cube's current pose, with
/// the chuck thumb axis chosen by proximity and fingers assigned by
/// minimum travel. With the perimeter fallback enabled, an infeasible
/// chuck becomes a triangle grasp.
GraspSpec plan_grasp(const EpisodeConfig& config, const WorldState& world);

/// Run one full episode: approach, grasp, pursue interpolated subgoals
/// across the goal trajectory, recover from drops. Deterministic in the
/// config (bit-identical logs on reruns).
EpisodeLog run_episode(const EpisodeConfig& config);

}  // namespace trifin
