#include "trifin/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace trifin {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail_field(const std::string& path, const std::string& what) {
  throw ConfigError("config field '" + path + "': " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double as_number(const ordered_json& j, const std::string& path) {
  if (!j.is_number()) fail_field(path, "expected a number");
  return j.get<double>();
}

int as_int(const ordered_json& j, const std::string& path) {
  if (!j.is_number_integer()) fail_field(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const ordered_json& j, const std::string& path) {
  if (!j.is_boolean()) fail_field(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const ordered_json& j, const std::string& path) {
  if (!j.is_string()) fail_field(path, "expected a string");
  return j.get<std::string>();
}

Vec3 as_vec3(const ordered_json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail_field(path, "expected an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) v[i] = as_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

void require_known_keys(const ordered_json& j, const std::string& path,
                        std::initializer_list<const char*> known) {
  if (!j.is_object()) fail_field(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) fail_field(join(path, item.key()), "unknown field");
  }
}

ordered_json vec3_json(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

ordered_json chain_json(const KinematicChain& chain) {
  ordered_json fingers = ordered_json::array();
  for (const FingerModel& f : chain.fingers) {
    ordered_json joints = ordered_json::array();
    for (const JointModel& j : f.joints) {
      joints.push_back({{"axis", vec3_json(j.axis)},
                        {"offset", vec3_json(j.offset)},
                        {"limit_lo", j.limit_lo},
                        {"limit_hi", j.limit_hi},
                        {"link_mass", j.link_mass},
                        {"link_com_offset", vec3_json(j.link_com_offset)}});
    }
    fingers.push_back({{"base_position", vec3_json(f.base_position)},
                       {"base_yaw", f.base_yaw},
                       {"joints", joints}});
  }
  return {{"gravity", vec3_json(chain.gravity)}, {"fingers", fingers}};
}

void read_chain(const ordered_json& j, const std::string& path, KinematicChain& chain) {
  require_known_keys(j, path, {"gravity", "fingers"});
  if (j.contains("gravity")) chain.gravity = as_vec3(j["gravity"], join(path, "gravity"));
  if (!j.contains("fingers")) return;
  const ordered_json& fingers = j["fingers"];
  const std::string fpath = join(path, "fingers");
  if (!fingers.is_array() || fingers.size() != kNumFingers)
    fail_field(fpath, "expected an array of 3 fingers");
  for (int f = 0; f < kNumFingers; ++f) {
    const ordered_json& jf = fingers[f];
    const std::string fp = fpath + "[" + std::to_string(f) + "]";
    require_known_keys(jf, fp, {"base_position", "base_yaw", "joints"});
    FingerModel& finger = chain.fingers[f];
    if (jf.contains("base_position"))
      finger.base_position = as_vec3(jf["base_position"], join(fp, "base_position"));
    if (jf.contains("base_yaw")) finger.base_yaw = as_number(jf["base_yaw"], join(fp, "base_yaw"));
    if (!jf.contains("joints")) continue;
    const ordered_json& joints = jf["joints"];
    const std::string jpath = join(fp, "joints");
    if (!joints.is_array() || joints.size() != kJointsPerFinger)
      fail_field(jpath, "expected an array of 3 joints");
    for (int k = 0; k < kJointsPerFinger; ++k) {
      const ordered_json& jj = joints[k];
      const std::string jp = jpath + "[" + std::to_string(k) + "]";
      require_known_keys(jj, jp, {"axis", "offset", "limit_lo", "limit_hi", "link_mass",
                                  "link_com_offset"});
      JointModel& joint = finger.joints[k];
      if (jj.contains("axis")) joint.axis = as_vec3(jj["axis"], join(jp, "axis"));
      if (jj.contains("offset")) joint.offset = as_vec3(jj["offset"], join(jp, "offset"));
      if (jj.contains("limit_lo")) joint.limit_lo = as_number(jj["limit_lo"], join(jp, "limit_lo"));
      if (jj.contains("limit_hi")) joint.limit_hi = as_number(jj["limit_hi"], join(jp, "limit_hi"));
      if (jj.contains("link_mass"))
        joint.link_mass = as_number(jj["link_mass"], join(jp, "link_mass"));
      if (jj.contains("link_com_offset"))
        joint.link_com_offset = as_vec3(jj["link_com_offset"], join(jp, "link_com_offset"));
    }
  }
}

ordered_json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("parse error in '" + path.string() + "' at line " +
                      std::to_string(line) + ", column " + std::to_string(col) + ": " +
                      e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  chain.validate();
  gains.validate();
  sim.validate();
  reward.validate();
  if (!(cube_start.half_extent > 0.0))
    throw ConfigError("cube: half_extent must be positive");
  if (!cube_start.position.allFinite() || !std::isfinite(cube_start.yaw))
    throw ConfigError("cube: non-finite start pose");
  if (cube_start.position.head<2>().norm() > sim.arena_radius)
    throw ConfigError("cube: start position outside the arena");
  if (!home_q.allFinite()) throw ConfigError("home_q: non-finite");
  if (episode.interp_n < 1) throw ConfigError("episode: interp_n must be >= 1");
  if (!(episode.subgoal_tol > 0.0)) throw ConfigError("episode: subgoal_tol must be positive");
  if (episode.subgoal_timeout < 1)
    throw ConfigError("episode: subgoal_timeout must be >= 1");
  if (!(episode.standoff >= 0.0)) throw ConfigError("episode: standoff must be >= 0");
  if (!(episode.duration > 0.0)) throw ConfigError("episode: duration must be positive");
}

RunConfig default_run_config() {
  RunConfig config;
  config.cube_start.position = {0.0, 0.0, config.cube_start.half_extent};
  config.cube_start.yaw = 0.0;
  for (int f = 0; f < kNumFingers; ++f) {
    config.home_q[3 * f + 0] = 0.0;
    config.home_q[3 * f + 1] = 0.55;
    config.home_q[3 * f + 2] = 2.5;
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const ordered_json j = parse_file(path);
  RunConfig config = default_run_config();
  require_known_keys(j, "",
                     {"chain", "gains", "sim", "reward", "cube", "home_q", "episode"});

  if (j.contains("chain")) read_chain(j["chain"], "chain", config.chain);

  if (j.contains("gains")) {
    const ordered_json& g = j["gains"];
    require_known_keys(g, "gains",
                       {"kp", "ki", "kd", "integral_clamp", "lambda", "max_cart_speed"});
    if (g.contains("kp")) config.gains.kp = as_vec3(g["kp"], "gains.kp");
    if (g.contains("ki")) config.gains.ki = as_vec3(g["ki"], "gains.ki");
    if (g.contains("kd")) config.gains.kd = as_vec3(g["kd"], "gains.kd");
    if (g.contains("integral_clamp"))
      config.gains.integral_clamp = as_number(g["integral_clamp"], "gains.integral_clamp");
    if (g.contains("lambda")) config.gains.lambda = as_number(g["lambda"], "gains.lambda");
    if (g.contains("max_cart_speed"))
      config.gains.max_cart_speed = as_number(g["max_cart_speed"], "gains.max_cart_speed");
  }

  if (j.contains("sim")) {
    const ordered_json& s = j["sim"];
    require_known_keys(s, "sim",
                       {"dt", "joint_vel_limit", "eps_contact", "eps_slip", "gravity_z",
                        "arena_radius", "floor_z", "gravity_comp_enabled", "droop_gain"});
    if (s.contains("dt")) config.sim.dt = as_number(s["dt"], "sim.dt");
    if (s.contains("joint_vel_limit"))
      config.sim.joint_vel_limit = as_number(s["joint_vel_limit"], "sim.joint_vel_limit");
    if (s.contains("eps_contact"))
      config.sim.eps_contact = as_number(s["eps_contact"], "sim.eps_contact");
    if (s.contains("eps_slip")) config.sim.eps_slip = as_number(s["eps_slip"], "sim.eps_slip");
    if (s.contains("gravity_z"))
      config.sim.gravity_z = as_number(s["gravity_z"], "sim.gravity_z");
    if (s.contains("arena_radius"))
      config.sim.arena_radius = as_number(s["arena_radius"], "sim.arena_radius");
    if (s.contains("floor_z")) config.sim.floor_z = as_number(s["floor_z"], "sim.floor_z");
    if (s.contains("gravity_comp_enabled"))
      config.sim.gravity_comp_enabled =
          as_bool(s["gravity_comp_enabled"], "sim.gravity_comp_enabled");
    if (s.contains("droop_gain"))
      config.sim.droop_gain = as_number(s["droop_gain"], "sim.droop_gain");
  }

  if (j.contains("reward")) {
    const ordered_json& r = j["reward"];
    require_known_keys(r, "reward", {"range_xy", "range_z"});
    if (r.contains("range_xy"))
      config.reward.range_xy = as_number(r["range_xy"], "reward.range_xy");
    if (r.contains("range_z")) config.reward.range_z = as_number(r["range_z"], "reward.range_z");
  }

  if (j.contains("cube")) {
    const ordered_json& c = j["cube"];
    require_known_keys(c, "cube", {"position", "yaw", "half_extent"});
    if (c.contains("position"))
      config.cube_start.position = as_vec3(c["position"], "cube.position");
    if (c.contains("yaw")) config.cube_start.yaw = as_number(c["yaw"], "cube.yaw");
    if (c.contains("half_extent"))
      config.cube_start.half_extent = as_number(c["half_extent"], "cube.half_extent");
  }

  if (j.contains("home_q")) {
    const ordered_json& h = j["home_q"];
    if (!h.is_array() || h.size() != kNumJoints)
      fail_field("home_q", "expected an array of 9 numbers");
    for (int i = 0; i < kNumJoints; ++i)
      config.home_q[i] = as_number(h[i], "home_q[" + std::to_string(i) + "]");
  }

  if (j.contains("episode")) {
    const ordered_json& e = j["episode"];
    require_known_keys(e, "episode",
                       {"grasp", "interp_n", "subgoal_tol", "subgoal_timeout", "standoff",
                        "perimeter_fallback_triangle", "duration"});
    if (e.contains("grasp"))
      config.episode.grasp = grasp_kind_from_string(as_string(e["grasp"], "episode.grasp"));
    if (e.contains("interp_n"))
      config.episode.interp_n = as_int(e["interp_n"], "episode.interp_n");
    if (e.contains("subgoal_tol"))
      config.episode.subgoal_tol = as_number(e["subgoal_tol"], "episode.subgoal_tol");
    if (e.contains("subgoal_timeout"))
      config.episode.subgoal_timeout = as_int(e["subgoal_timeout"], "episode.subgoal_timeout");
    if (e.contains("standoff"))
      config.episode.standoff = as_number(e["standoff"], "episode.standoff");
    if (e.contains("perimeter_fallback_triangle"))
      config.episode.perimeter_fallback_triangle =
          as_bool(e["perimeter_fallback_triangle"], "episode.perimeter_fallback_triangle");
    if (e.contains("duration"))
      config.episode.duration = as_number(e["duration"], "episode.duration");
  }

  config.validate();
  return config;
}

namespace {

ordered_json run_config_json(const RunConfig& config) {
  ordered_json home = ordered_json::array();
  for (int i = 0; i < kNumJoints; ++i) home.push_back(config.home_q[i]);
  return {
      {"chain", chain_json(config.chain)},
      {"gains",
       {{"kp", vec3_json(config.gains.kp)},
        {"ki", vec3_json(config.gains.ki)},
        {"kd", vec3_json(config.gains.kd)},
        {"integral_clamp", config.gains.integral_clamp},
        {"lambda", config.gains.lambda},
        {"max_cart_speed", config.gains.max_cart_speed}}},
      {"sim",
       {{"dt", config.sim.dt},
        {"joint_vel_limit", config.sim.joint_vel_limit},
        {"eps_contact", config.sim.eps_contact},
        {"eps_slip", config.sim.eps_slip},
        {"gravity_z", config.sim.gravity_z},
        {"arena_radius", config.sim.arena_radius},
        {"floor_z", config.sim.floor_z},
        {"gravity_comp_enabled", config.sim.gravity_comp_enabled},
        {"droop_gain", config.sim.droop_gain}}},
      {"reward", {{"range_xy", config.reward.range_xy}, {"range_z", config.reward.range_z}}},
      {"cube",
       {{"position", vec3_json(config.cube_start.position)},
        {"yaw", config.cube_start.yaw},
        {"half_extent", config.cube_start.half_extent}}},
      {"home_q", home},
      {"episode",
       {{"grasp", to_string(config.episode.grasp)},
        {"interp_n", config.episode.interp_n},
        {"subgoal_tol", config.episode.subgoal_tol},
        {"subgoal_timeout", config.episode.subgoal_timeout},
        {"standoff", config.episode.standoff},
        {"perimeter_fallback_triangle", config.episode.perimeter_fallback_triangle},
        {"duration", config.episode.duration}}},
  };
}

}  // namespace

void save_run_config(const RunConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << run_config_json(config).dump(2) << "\n";
}

std::string config_hash(const RunConfig& config) {
  const std::string dump = run_config_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a 64
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GoalTrajectory load_goal_trajectory(const std::filesystem::path& path) {
  const ordered_json j = parse_file(path);
  if (!j.is_array()) throw ConfigError("trajectory file: expected a JSON array");
  GoalTrajectory trajectory;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "entry " + std::to_string(i);
    require_known_keys(j[i], where, {"t_activate", "goal"});
    if (!j[i].contains("t_activate") || !j[i].contains("goal"))
      fail_field(where, "needs t_activate and goal");
    GoalEntry e;
    e.t_activate = as_number(j[i]["t_activate"], join(where, "t_activate"));
    e.goal = as_vec3(j[i]["goal"], join(where, "goal"));
    trajectory.entries.push_back(e);
  }
  return trajectory;
}

void save_goal_trajectory(const GoalTrajectory& trajectory, const std::filesystem::path& path) {
  ordered_json arr = ordered_json::array();
  for (const GoalEntry& e : trajectory.entries)
    arr.push_back({{"t_activate", e.t_activate}, {"goal", vec3_json(e.goal)}});
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << arr.dump(2) << "\n";
}

}  // namespace trifin
