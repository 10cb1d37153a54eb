#include "trifin/cli.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "trifin/episode_log.hpp"

namespace trifin {

namespace fs = std::filesystem;

namespace {

/// Shortest round-trip decimal form, same as the JSON logs use.
std::string num(double x) { return nlohmann::ordered_json(x).dump(); }

std::vector<EpisodeLog> run_batch(const CommonOptions& common, const RunConfig& run,
                                  int episodes, int jobs) {
  std::vector<EpisodeLog> logs(episodes);
  jobs = std::max(1, std::min(jobs, episodes));
  if (jobs == 1) {
    for (int i = 0; i < episodes; ++i)
      logs[i] = run_episode(make_episode_config(common, run, common.seed + i));
    return logs;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < episodes; i = next.fetch_add(1))
        logs[i] = run_episode(make_episode_config(common, run, common.seed + i));
    });
  }
  for (std::thread& worker : workers) worker.join();
  return logs;
}

SummaryStats summarize_logs(const std::vector<EpisodeLog>& logs) {
  std::vector<double> rewards;
  rewards.reserve(logs.size());
  int drops = 0;
  for (const EpisodeLog& log : logs) {
    rewards.push_back(cumulative_reward(log));
    drops += drop_count(log);
  }
  SummaryStats stats = summarize(rewards);
  stats.total_drops = drops;
  return stats;
}

std::string summary_row(const std::string& label, const SummaryStats& stats) {
  return label + "," + num(stats.mean) + "," + num(stats.median) + "," + num(stats.stddev) +
         "," + std::to_string(stats.total_drops);
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

}  // namespace

RunConfig resolve_run_config(const CommonOptions& common, const VariantOptions& variant) {
  RunConfig run =
      common.config_path ? load_run_config(*common.config_path) : default_run_config();
  if (variant.grasp) run.episode.grasp = *variant.grasp;
  if (variant.interp_n) run.episode.interp_n = *variant.interp_n;
  if (variant.perimeter_fallback)
    run.episode.perimeter_fallback_triangle = *variant.perimeter_fallback;
  if (common.duration) run.episode.duration = *common.duration;
  run.validate();
  return run;
}

EpisodeConfig make_episode_config(const CommonOptions& common, const RunConfig& run,
                                  std::uint64_t seed) {
  EpisodeConfig config;
  config.run = run;
  config.seed = seed;
  if (common.trajectory_path) {
    config.trajectory = load_goal_trajectory(*common.trajectory_path);
  } else {
    GoalGenParams params;
    params.goal_count = common.goal_count;
    if (common.dwell) params.dwell_s = *common.dwell;
    params.arena_radius = run.sim.arena_radius;
    config.trajectory = generate_goal_trajectory(seed, params);
  }
  config.validate();
  return config;
}

std::string variant_label(const RunConfig& run) {
  std::string label = std::string(to_string(run.episode.grasp)) + "-n" +
                      std::to_string(run.episode.interp_n);
  if (run.episode.perimeter_fallback_triangle) label += "-fb";
  return label;
}

int cli_run(const CommonOptions& common, const VariantOptions& variant) {
  const RunConfig run = resolve_run_config(common, variant);
  const EpisodeConfig config = make_episode_config(common, run, common.seed);
  const EpisodeLog log = run_episode(config);

  ensure_out_dir(common.out_dir);
  const fs::path path = fs::path(common.out_dir) / ("run_" + variant_label(run) + "_seed" +
                                                    std::to_string(common.seed) + ".jsonl");
  write_episode_log(log, path);

  std::cout << "episode " << variant_label(run) << " seed " << common.seed << ": reward "
            << num(cumulative_reward(log)) << ", drops " << drop_count(log) << ", steps "
            << log.records.size() << "\n"
            << "log: " << path.string() << "\n";
  return 0;
}

int cli_batch(const CommonOptions& common, const VariantOptions& variant, int episodes,
              int jobs) {
  if (episodes < 1) throw InputError("batch: episodes must be >= 1");
  const RunConfig run = resolve_run_config(common, variant);
  const std::vector<EpisodeLog> logs = run_batch(common, run, episodes, jobs);

  ensure_out_dir(common.out_dir);
  const std::string label = variant_label(run);
  for (int i = 0; i < episodes; ++i) {
    const fs::path path =
        fs::path(common.out_dir) /
        ("ep_" + label + "_seed" + std::to_string(common.seed + i) + ".jsonl");
    write_episode_log(logs[i], path);
  }

  const SummaryStats stats = summarize_logs(logs);
  const fs::path summary_path = fs::path(common.out_dir) / "summary.csv";
  {
    std::ofstream out(summary_path);
    if (!out) throw ConfigError("cannot write '" + summary_path.string() + "'");
    out << "config,mean,median,stddev,drops\n" << summary_row(label, stats) << "\n";
  }

  std::cout << "config,mean,median,stddev,drops\n" << summary_row(label, stats) << "\n"
            << "episodes " << episodes << ", summary: " << summary_path.string() << "\n";
  return 0;
}

int cli_compare(const CommonOptions& common, const VariantOptions& a, const VariantOptions& b,
                int episodes, int jobs) {
  if (episodes < 1) throw InputError("compare: episodes must be >= 1");
  const RunConfig run_a = resolve_run_config(common, a);
  const RunConfig run_b = resolve_run_config(common, b);

  const std::vector<EpisodeLog> logs_a = run_batch(common, run_a, episodes, jobs);
  const std::vector<EpisodeLog> logs_b = run_batch(common, run_b, episodes, jobs);

  int wins_a = 0, wins_b = 0;
  for (int i = 0; i < episodes; ++i) {
    const double ra = cumulative_reward(logs_a[i]);
    const double rb = cumulative_reward(logs_b[i]);
    if (ra > rb) ++wins_a;
    if (rb > ra) ++wins_b;
  }
  const SummaryStats stats_a = summarize_logs(logs_a);
  const SummaryStats stats_b = summarize_logs(logs_b);
  const double rate_a = static_cast<double>(wins_a) / episodes;
  const double rate_b = static_cast<double>(wins_b) / episodes;

  ensure_out_dir(common.out_dir);
  const fs::path path = fs::path(common.out_dir) / "compare.csv";
  const std::string table = "config,mean,median,stddev,drops,win_rate\n" +
                            summary_row(variant_label(run_a), stats_a) + "," + num(rate_a) +
                            "\n" + summary_row(variant_label(run_b), stats_b) + "," +
                            num(rate_b) + "\n";
  {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << table;
  }
  std::cout << table << "paired on seeds " << common.seed << ".."
            << common.seed + episodes - 1 << ", table: " << path.string() << "\n";
  return 0;
}

}  // namespace trifin
