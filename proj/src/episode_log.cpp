#include "trifin/episode_log.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trifin/eval.hpp"

namespace trifin {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json vec3_json(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from(const ordered_json& j, const char* what) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError(std::string("log: ") + what + " must be an array of 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

ordered_json event_json(const SimEvent& e) {
  ordered_json j = {{"kind", to_string(e.kind)}, {"i", e.step_index}};
  if (e.kind == SimEventKind::CubeDropped) j["max_residual"] = e.max_residual;
  return j;
}

SimEvent event_from(const ordered_json& j) {
  SimEvent e;
  e.kind = sim_event_kind_from_string(j.at("kind").get<std::string>());
  e.step_index = j.at("i").get<long>();
  if (j.contains("max_residual")) e.max_residual = j["max_residual"].get<double>();
  return e;
}

}  // namespace

void write_episode_log(const EpisodeLog& log, std::ostream& out) {
  const ordered_json header = {{"type", "header"},
                               {"seed", log.seed},
                               {"config_hash", log.config_hash},
                               {"grasp", to_string(log.grasp)},
                               {"interp_n", log.interp_n},
                               {"dt", log.dt},
                               {"duration", log.duration}};
  out << header.dump() << "\n";

  for (const StepRecord& r : log.records) {
    ordered_json events = ordered_json::array();
    for (const SimEvent& e : r.events) events.push_back(event_json(e));
    const ordered_json line = {{"type", "step"},
                               {"i", r.step_index},
                               {"t", r.t},
                               {"phase", to_string(r.phase)},
                               {"cube", vec3_json(r.cube_position)},
                               {"goal", vec3_json(r.active_goal)},
                               {"subgoal", vec3_json(r.active_subgoal)},
                               {"reward", r.reward},
                               {"err", ordered_json::array({r.finger_error_norm[0],
                                                            r.finger_error_norm[1],
                                                            r.finger_error_norm[2]})},
                               {"slip", r.slip_residual_max},
                               {"jump", r.error_jump_max},
                               {"attached", r.attached},
                               {"events", events}};
    out << line.dump() << "\n";
  }

  const ordered_json end = {{"type", "end"},
                            {"steps", log.records.size()},
                            {"cumulative_reward", cumulative_reward(log)},
                            {"drops", drop_count(log)}};
  out << end.dump() << "\n";
}

void write_episode_log(const EpisodeLog& log, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  write_episode_log(log, out);
}

std::string episode_log_to_string(const EpisodeLog& log) {
  std::ostringstream out;
  write_episode_log(log, out);
  return out.str();
}

EpisodeLog read_episode_log(std::istream& in) {
  EpisodeLog log;
  std::string line;
  bool saw_header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const ordered_json::parse_error& e) {
      throw ConfigError("log line " + std::to_string(lineno) + ": " + e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "header") {
      saw_header = true;
      log.seed = j.at("seed").get<std::uint64_t>();
      log.config_hash = j.at("config_hash").get<std::string>();
      log.grasp = grasp_kind_from_string(j.at("grasp").get<std::string>());
      log.interp_n = j.at("interp_n").get<int>();
      log.dt = j.at("dt").get<double>();
      log.duration = j.at("duration").get<double>();
    } else if (type == "step") {
      StepRecord r;
      r.step_index = j.at("i").get<long>();
      r.t = j.at("t").get<double>();
      r.phase = phase_from_string(j.at("phase").get<std::string>());
      r.cube_position = vec3_from(j.at("cube"), "cube");
      r.active_goal = vec3_from(j.at("goal"), "goal");
      r.active_subgoal = vec3_from(j.at("subgoal"), "subgoal");
      r.reward = j.at("reward").get<double>();
      const ordered_json& err = j.at("err");
      if (!err.is_array() || err.size() != kNumFingers)
        throw ConfigError("log line " + std::to_string(lineno) + ": bad err array");
      for (int f = 0; f < kNumFingers; ++f) r.finger_error_norm[f] = err[f].get<double>();
      r.slip_residual_max = j.at("slip").get<double>();
      r.error_jump_max = j.at("jump").get<double>();
      r.attached = j.at("attached").get<bool>();
      for (const auto& ev : j.at("events")) r.events.push_back(event_from(ev));
      log.records.push_back(std::move(r));
    } else if (type == "end") {
      // Derived values; recomputed on write.
    } else {
      throw ConfigError("log line " + std::to_string(lineno) + ": unknown record type");
    }
  }
  if (!saw_header) throw ConfigError("log: missing header record");
  return log;
}

EpisodeLog read_episode_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  return read_episode_log(in);
}

}  // namespace trifin
