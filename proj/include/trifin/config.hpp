#pragma once

#include <filesystem>
#include <string>

#include "trifin/control.hpp"
#include "trifin/grasp.hpp"
#include "trifin/kinematics.hpp"
#include "trifin/reward.hpp"
#include "trifin/sim.hpp"
#include "trifin/trajectory.hpp"

namespace trifin {

/// Episode-level knobs shared by every run.
struct EpisodeDefaults {
  GraspKind grasp = GraspKind::Triangle;
  int interp_n = 20;           ///< subgoals per goal leg
  double subgoal_tol = 0.015;  ///< m
  int subgoal_timeout = 150;   ///< control steps before a forced advance
  double standoff = 0.04;      ///< pregrasp displacement, m
  bool perimeter_fallback_triangle = false;  ///< chuck falls back to triangle when infeasible
  double duration = 120.0;     ///< s
};

/// Everything an episode needs besides the seed and the goal trajectory.
struct RunConfig {
  KinematicChain chain = default_chain();
  ControllerGains gains;
  SimParams sim;
  RewardRanges reward;
  CubeGeom cube_start;
  JointVector home_q = JointVector::Zero();
  EpisodeDefaults episode;

  void validate() const;  // throws ConfigError
};

RunConfig default_run_config();

/// Load a JSON config; any field present overrides the built-in default.
/// Parse errors report line and column, schema errors the offending field
/// path. Throws ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

void save_run_config(const RunConfig& config, const std::filesystem::path& path);

/// Stable FNV-1a 64-bit hash of the canonical serialized form, hex.
std::string config_hash(const RunConfig& config);

/// Goal trajectory files: JSON array of {"t_activate": s, "goal": [x,y,z]}.
GoalTrajectory load_goal_trajectory(const std::filesystem::path& path);
void save_goal_trajectory(const GoalTrajectory& trajectory, const std::filesystem::path& path);

}  // namespace trifin
