#pragma once

#include <algorithm>
#include <vector>

#include "trifin/errors.hpp"
#include "trifin/types.hpp"

namespace trifin {

struct GoalEntry {
  double t_activate = 0.0;  ///< s
  Vec3 goal = Vec3::Zero();
};

/// Timed goal sequence for one episode. The first entry must activate at
/// t = 0 and activation times must be strictly increasing.
struct GoalTrajectory {
  std::vector<GoalEntry> entries;

  /// Structural checks plus arena containment (goals inside the cylinder
  /// of `arena_radius`, strictly above `floor_z`). Throws ConfigError.
  void validate(double arena_radius, double floor_z) const;

  /// Index of the entry with the largest t_activate <= t. Throws
  /// InputError when empty or t precedes the first activation.
  int active_index(double t) const;
};

/// Points along the segment from start to end at parameters k/n,
/// k = 1..n: the start is excluded, the end included and bit-exact.
/// n = 1 degenerates to {end}. Throws InputError on n < 1.
std::vector<Vec3> interpolate_linear(const Vec3& start, const Vec3& end, int n);

/// Subgoal sequence toward one goal with a progress cursor.
struct WaypointPlan {
  std::vector<Vec3> subgoals;
  int cursor = 0;            ///< in [0, n]; n means exhausted
  int steps_on_subgoal = 0;  ///< advance() calls spent on the current subgoal
  Vec3 source_goal = Vec3::Zero();

  int n() const { return static_cast<int>(subgoals.size()); }
  bool exhausted() const { return cursor >= n(); }

  /// Last subgoal remains active after exhaustion.
  const Vec3& active_subgoal() const { return subgoals[std::min(cursor, n() - 1)]; }
};

/// Interpolated plan from the cube's current position to the goal.
WaypointPlan make_plan(const Vec3& cube_pos, const Vec3& goal, int n);

struct AdvanceOutcome {
  bool advanced = false;
  bool by_proximity = false;  ///< false on a timeout advance
};

/// Advance the cursor when the cube is within `tol` of the active subgoal,
/// or after `timeout_steps` calls without reaching it. At most one
/// increment per call; exhausted plans are left unchanged.
AdvanceOutcome advance(WaypointPlan& plan, const Vec3& cube_pos, double tol, int timeout_steps);

}  // namespace trifin
