#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "trifin/eval.hpp"

namespace trifin {

/// Per-variant overrides on top of the resolved config.
struct VariantOptions {
  std::optional<GraspKind> grasp;
  std::optional<int> interp_n;
  std::optional<bool> perimeter_fallback;
};

/// Options shared by every subcommand.
struct CommonOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> trajectory_path;
  std::string out_dir = "runs";
  std::uint64_t seed = 0;
  std::optional<double> duration;  ///< s, overrides the config
  int goal_count = 5;              ///< generated trajectories only
  std::optional<double> dwell;     ///< s between goal activations
};

/// Resolve config file + overrides into a ready RunConfig.
RunConfig resolve_run_config(const CommonOptions& common, const VariantOptions& variant);

/// Episode for a given seed: the trajectory comes from the file when given,
/// otherwise it is generated from that seed.
EpisodeConfig make_episode_config(const CommonOptions& common, const RunConfig& run,
                                  std::uint64_t seed);

/// Short tag like "triangle-n20" used in filenames and tables.
std::string variant_label(const RunConfig& run);

/// Single episode; writes <out>/run_<label>_seed<seed>.jsonl. Returns 0.
int cli_run(const CommonOptions& common, const VariantOptions& variant);

/// Seeded batch (seeds seed .. seed+episodes-1), optionally across worker
/// threads; per-episode logs plus summary.csv. Summaries are identical for
/// any job count. Returns 0.
int cli_batch(const CommonOptions& common, const VariantOptions& variant, int episodes,
              int jobs);

/// Paired A/B comparison on identical seeds; writes compare.csv with
/// mean/median/stddev/drops per config and the per-seed win rate.
int cli_compare(const CommonOptions& common, const VariantOptions& a, const VariantOptions& b,
                int episodes, int jobs);

}  // namespace trifin
