#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "trifin/cli.hpp"

namespace {

trifin::GraspKind parse_grasp(const std::string& name) {
  return trifin::grasp_kind_from_string(name);
}

void add_common(CLI::App* cmd, trifin::CommonOptions& common) {
  cmd->add_option("--config", common.config_path, "JSON config file (fields override defaults)");
  cmd->add_option("--trajectory", common.trajectory_path,
                  "goal trajectory file; omit to generate goals from the seed");
  cmd->add_option("--out", common.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", common.seed, "base seed")->capture_default_str();
  cmd->add_option("--duration", common.duration, "episode length in seconds");
  cmd->add_option("--goals", common.goal_count, "goals per generated trajectory")
      ->capture_default_str();
  cmd->add_option("--dwell", common.dwell, "seconds between goal activations (default 12)");
}

void add_variant(CLI::App* cmd, const std::string& prefix, trifin::VariantOptions& variant) {
  std::string grasp_flag = "--" + prefix + "grasp";
  std::string interp_flag = "--" + prefix + "interp-n";
  std::string fallback_flag = "--" + prefix + "perimeter-fallback";
  cmd->add_option_function<std::string>(
         grasp_flag, [&variant](const std::string& v) { variant.grasp = parse_grasp(v); },
         "grasp kind: triangle or chuck")
      ->check(CLI::IsMember({"triangle", "chuck"}));
  cmd->add_option_function<int>(
         interp_flag, [&variant](int v) { variant.interp_n = v; },
         "subgoals per goal leg (1 disables interpolation)")
      ->check(CLI::PositiveNumber);
  cmd->add_option_function<std::string>(
         fallback_flag,
         [&variant](const std::string& v) { variant.perimeter_fallback = (v == "triangle"); },
         "'triangle' switches an infeasible chuck grasp to a triangle grasp")
      ->check(CLI::IsMember({"off", "triangle"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-finger pick-and-place benchmark harness"};
  app.require_subcommand(1);

  trifin::CommonOptions common;
  trifin::VariantOptions variant;
  trifin::VariantOptions variant_a;
  trifin::VariantOptions variant_b;
  int episodes = 20;
  int jobs = 1;

  CLI::App* run = app.add_subcommand("run", "run a single episode and write its log");
  add_common(run, common);
  add_variant(run, "", variant);

  CLI::App* batch = app.add_subcommand("batch", "run seeded episodes and summarize");
  add_common(batch, common);
  add_variant(batch, "", variant);
  batch->add_option("--episodes", episodes, "episode count")->capture_default_str();
  batch->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  CLI::App* compare =
      app.add_subcommand("compare", "paired A/B comparison on identical seeds "
                                    "(defaults: A = interp-n 1, B = interp-n 20)");
  add_common(compare, common);
  add_variant(compare, "a-", variant_a);
  add_variant(compare, "b-", variant_b);
  compare->add_option("--episodes", episodes, "episodes per config")->capture_default_str();
  compare->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return trifin::cli_run(common, variant);
    if (batch->parsed()) return trifin::cli_batch(common, variant, episodes, jobs);
    if (compare->parsed()) {
      if (!variant_a.interp_n) variant_a.interp_n = 1;
      if (!variant_b.interp_n) variant_b.interp_n = 20;
      return trifin::cli_compare(common, variant_a, variant_b, episodes, jobs);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
