#pragma once

#include <cstdint>
#include <vector>

#include "trifin/fsm.hpp"

namespace trifin {

/// Sum of per-step rewards.
double cumulative_reward(const EpisodeLog& log);

/// Number of CubeDropped events across the episode.
int drop_count(const EpisodeLog& log);

struct SummaryStats {
  double mean = 0.0;
  double median = 0.0;  ///< midpoint of the two middle values for even counts
  double stddev = 0.0;  ///< population (n divisor)
  int episode_count = 0;
  int total_drops = 0;  ///< filled by batch drivers
};

/// Mean / median / population standard deviation of per-episode
/// cumulative rewards. Throws InputError on an empty input.
SummaryStats summarize(const std::vector<double>& episode_rewards);

struct GoalGenParams {
  int goal_count = 5;
  double dwell_s = 12.0;          ///< activation spacing
  double arena_radius = 0.195;    ///< m
  double disc_fraction = 0.8;     ///< goals sampled within this fraction of the radius
  double z_lo = 0.06;             ///< m
  double z_hi = 0.13;             ///< m
};

/// Seeded goal sequence: horizontal position uniform over the disc of
/// disc_fraction * arena_radius, height uniform in [z_lo, z_hi],
/// activation times k * dwell_s. Same seed, same trajectory.
GoalTrajectory generate_goal_trajectory(std::uint64_t seed, const GoalGenParams& params);

}  // namespace trifin
