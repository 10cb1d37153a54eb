#include "trifin/trajectory.hpp"

#include <cmath>
#include <string>

namespace trifin {

void GoalTrajectory::validate(double arena_radius, double floor_z) const {
  if (entries.empty()) throw ConfigError("trajectory: no goal entries");
  if (entries.front().t_activate != 0.0)
    throw ConfigError("trajectory: first goal must activate at t = 0");
  double prev = -1.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const GoalEntry& e = entries[i];
    const std::string where = "trajectory entry " + std::to_string(i);
    if (!std::isfinite(e.t_activate) || !e.goal.allFinite())
      throw ConfigError(where + ": non-finite value");
    if (e.t_activate <= prev)
      throw ConfigError(where + ": activation times must be strictly increasing");
    prev = e.t_activate;
    if (e.goal.head<2>().norm() > arena_radius)
      throw ConfigError(where + ": goal outside the arena cylinder");
    if (!(e.goal.z() > floor_z)) throw ConfigError(where + ": goal not above the floor");
  }
}

int GoalTrajectory::active_index(double t) const {
  if (entries.empty()) throw InputError("active_index: empty trajectory");
  if (t < entries.front().t_activate)
    throw InputError("active_index: t precedes the first activation");
  int idx = 0;
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].t_activate <= t) idx = static_cast<int>(i);
  return idx;
}

std::vector<Vec3> interpolate_linear(const Vec3& start, const Vec3& end, int n) {
  if (n < 1) throw InputError("interpolate_linear: n must be >= 1");
  if (!start.allFinite() || !end.allFinite())
    throw InputError("interpolate_linear: non-finite endpoint");
  std::vector<Vec3> points;
  points.reserve(n);
  const Vec3 delta = end - start;
  for (int k = 1; k < n; ++k)
    points.emplace_back(start + (static_cast<double>(k) / n) * delta);
  points.push_back(end);  // exact, not start + 1.0 * delta
  return points;
}

WaypointPlan make_plan(const Vec3& cube_pos, const Vec3& goal, int n) {
  WaypointPlan plan;
  plan.subgoals = interpolate_linear(cube_pos, goal, n);
  plan.source_goal = goal;
  return plan;
}

AdvanceOutcome advance(WaypointPlan& plan, const Vec3& cube_pos, double tol, int timeout_steps) {
  if (!(tol > 0.0)) throw InputError("advance: tol must be positive");
  if (timeout_steps < 1) throw InputError("advance: timeout_steps must be >= 1");
  if (!cube_pos.allFinite()) throw InputError("advance: non-finite cube position");

  AdvanceOutcome out;
  if (plan.exhausted()) return out;
  plan.steps_on_subgoal += 1;
  const bool near = (cube_pos - plan.subgoals[plan.cursor]).norm() <= tol;
  if (near || plan.steps_on_subgoal >= timeout_steps) {
    plan.cursor += 1;
    plan.steps_on_subgoal = 0;
    out.advanced = true;
    out.by_proximity = near;
  }
  return out;
}

}  // namespace trifin
