#include "trifin/eval.hpp"

#include <algorithm>
#include <cmath>

#include "trifin/rng.hpp"

namespace trifin {

double cumulative_reward(const EpisodeLog& log) {
  double sum = 0.0;
  for (const StepRecord& r : log.records) sum += r.reward;
  return sum;
}

int drop_count(const EpisodeLog& log) {
  int drops = 0;
  for (const StepRecord& r : log.records)
    for (const SimEvent& e : r.events)
      if (e.kind == SimEventKind::CubeDropped) ++drops;
  return drops;
}

SummaryStats summarize(const std::vector<double>& episode_rewards) {
  if (episode_rewards.empty()) throw InputError("summarize: no episodes");
  const double n = static_cast<double>(episode_rewards.size());

  SummaryStats stats;
  stats.episode_count = static_cast<int>(episode_rewards.size());
  double sum = 0.0;
  for (double r : episode_rewards) sum += r;
  stats.mean = sum / n;

  double sq = 0.0;
  for (double r : episode_rewards) sq += (r - stats.mean) * (r - stats.mean);
  stats.stddev = std::sqrt(sq / n);

  std::vector<double> sorted = episode_rewards;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  stats.median = (sorted.size() % 2 == 1) ? sorted[mid]
                                          : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return stats;
}

GoalTrajectory generate_goal_trajectory(std::uint64_t seed, const GoalGenParams& params) {
  if (params.goal_count < 1) throw InputError("goal generation: goal_count must be >= 1");
  if (!(params.dwell_s > 0.0)) throw InputError("goal generation: dwell_s must be positive");
  if (!(params.arena_radius > 0.0) || !(params.disc_fraction > 0.0) ||
      params.disc_fraction > 1.0)
    throw InputError("goal generation: bad arena geometry");
  if (!(params.z_lo > 0.0) || params.z_hi < params.z_lo)
    throw InputError("goal generation: need 0 < z_lo <= z_hi");

  Rng rng(seed);
  GoalTrajectory trajectory;
  trajectory.entries.reserve(params.goal_count);
  for (int k = 0; k < params.goal_count; ++k) {
    GoalEntry e;
    e.t_activate = k * params.dwell_s;
    e.goal = rng.on_disc(params.disc_fraction * params.arena_radius);
    e.goal.z() = rng.uniform(params.z_lo, params.z_hi);
    trajectory.entries.push_back(e);
  }
  return trajectory;
}

}  // namespace trifin
