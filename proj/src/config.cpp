#include "portnav/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "portnav/errors.hpp"

namespace portnav {

std::string format_double(double v) {
  char buf[400];
  const double mag = std::abs(v);
  const bool plain = mag == 0.0 || (mag >= 1e-4 && mag < 1e15);
  const auto res = plain ? std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed)
                         : std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

[[noreturn]] void bad_value(const std::string& key, const std::string& text, const char* expected) {
  throw InvalidConfig("config: " + key + " = '" + text + "' is not " + expected);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) bad_value(key, text, "a number");
  return v;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  Int v{};
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) bad_value(key, text, "an integer");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  bad_value(key, text, "a boolean");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

// Typed binders. `ref` maps a config to the referenced member.
template <typename Ref>
Field real(std::string section, std::string key, Ref ref) {
  const std::string full = section + "." + key;
  return {section, key, [ref](const RunConfig& c) { return format_double(ref(const_cast<RunConfig&>(c))); },
          [ref, full](RunConfig& c, const std::string& t) { ref(c) = parse_double(full, t); }};
}

template <typename Ref>
Field integer(std::string section, std::string key, Ref ref) {
  const std::string full = section + "." + key;
  return {section, key, [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); },
          [ref, full](RunConfig& c, const std::string& t) {
            using T = std::remove_reference_t<decltype(ref(c))>;
            ref(c) = parse_int<T>(full, t);
          }};
}

template <typename Ref>
Field boolean(std::string section, std::string key, Ref ref) {
  const std::string full = section + "." + key;
  return {section, key, [ref](const RunConfig& c) { return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false"); },
          [ref, full](RunConfig& c, const std::string& t) { ref(c) = parse_bool(full, t); }};
}

template <typename Ref>
Field text(std::string section, std::string key, Ref ref) {
  return {section, key, [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)); },
          [ref](RunConfig& c, const std::string& t) { ref(c) = trim(t); }};
}

template <typename Ref>
Field range(std::string section, std::string key, Ref ref) {
  const std::string full = section + "." + key;
  return {section, key,
          [ref](const RunConfig& c) {
            const Range r = ref(const_cast<RunConfig&>(c));
            return format_double(r.lo) + ", " + format_double(r.hi);
          },
          [ref, full](RunConfig& c, const std::string& t) {
            const auto parts = split(t, ',');
            if (parts.size() != 2) bad_value(full, t, "a 'lo, hi' pair");
            ref(c) = Range{parse_double(full, parts[0]), parse_double(full, parts[1])};
          }};
}

template <typename Ref>
Field count_range(std::string section, std::string key, Ref ref) {
  const std::string full = section + "." + key;
  return {section, key,
          [ref](const RunConfig& c) {
            const CountRange r = ref(const_cast<RunConfig&>(c));
            return std::to_string(r.lo) + ", " + std::to_string(r.hi);
          },
          [ref, full](RunConfig& c, const std::string& t) {
            const auto parts = split(t, ',');
            if (parts.size() == 1) {
              const int v = parse_int<int>(full, parts[0]);
              ref(c) = CountRange{v, v};
              return;
            }
            if (parts.size() != 2) bad_value(full, t, "a 'lo, hi' pair");
            ref(c) = CountRange{parse_int<int>(full, parts[0]), parse_int<int>(full, parts[1])};
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    // [vessel]
    f.push_back(real("vessel", "mass", [](RunConfig& c) -> double& { return c.env.vessel.mass; }));
    f.push_back(real("vessel", "turn_rate", [](RunConfig& c) -> double& { return c.env.vessel.turn_rate; }));
    f.push_back(real("vessel", "thrust_max", [](RunConfig& c) -> double& { return c.env.vessel.thrust_max; }));
    f.push_back(real("vessel", "speed_max", [](RunConfig& c) -> double& { return c.env.vessel.speed_max; }));
    f.push_back(real("vessel", "angular_rate_max", [](RunConfig& c) -> double& { return c.env.vessel.angular_rate_max; }));
    f.push_back(real("vessel", "dt", [](RunConfig& c) -> double& { return c.env.vessel.dt; }));
    // [world]
    f.push_back(real("world", "width", [](RunConfig& c) -> double& { return c.env.world.width; }));
    f.push_back(real("world", "height", [](RunConfig& c) -> double& { return c.env.world.height; }));
    f.push_back(count_range("world", "quay_count", [](RunConfig& c) -> CountRange& { return c.env.world.quay_count; }));
    f.push_back(range("world", "quay_width", [](RunConfig& c) -> Range& { return c.env.world.quay_width; }));
    f.push_back(range("world", "quay_depth", [](RunConfig& c) -> Range& { return c.env.world.quay_depth; }));
    f.push_back(count_range("world", "static_count", [](RunConfig& c) -> CountRange& { return c.env.world.static_count; }));
    f.push_back(range("world", "static_radius", [](RunConfig& c) -> Range& { return c.env.world.static_radius; }));
    f.push_back(count_range("world", "static_vertices", [](RunConfig& c) -> CountRange& { return c.env.world.static_vertices; }));
    f.push_back(count_range("world", "dynamic_count", [](RunConfig& c) -> CountRange& { return c.env.world.dynamic_count; }));
    f.push_back(range("world", "dynamic_radius", [](RunConfig& c) -> Range& { return c.env.world.dynamic_radius; }));
    f.push_back(range("world", "dynamic_speed", [](RunConfig& c) -> Range& { return c.env.world.dynamic_speed; }));
    f.push_back(count_range("world", "route_waypoints", [](RunConfig& c) -> CountRange& { return c.env.world.route_waypoints; }));
    f.push_back(real("world", "goal_radius", [](RunConfig& c) -> double& { return c.env.world.goal_radius; }));
    f.push_back(real("world", "min_separation", [](RunConfig& c) -> double& { return c.env.world.min_separation; }));
    f.push_back(real("world", "spawn_clearance", [](RunConfig& c) -> double& { return c.env.world.spawn_clearance; }));
    f.push_back({"world", "spawn_mode",
                 [](const RunConfig& c) {
                   return std::string(c.env.world.spawn_mode == SpawnMode::NearGoal ? "near_goal" : "random");
                 },
                 [](RunConfig& c, const std::string& t) {
                   const std::string v = trim(t);
                   if (v == "random") c.env.world.spawn_mode = SpawnMode::Random;
                   else if (v == "near_goal") c.env.world.spawn_mode = SpawnMode::NearGoal;
                   else bad_value("world.spawn_mode", t, "'random' or 'near_goal'");
                 }});
    f.push_back(real("world", "near_goal_distance", [](RunConfig& c) -> double& { return c.env.world.near_goal_distance; }));
    f.push_back(integer("world", "attempt_budget", [](RunConfig& c) -> int& { return c.env.world.attempt_budget; }));
    // [sensor]
    f.push_back(integer("sensor", "n_rays", [](RunConfig& c) -> int& { return c.env.sensor.n_rays; }));
    f.push_back(real("sensor", "fov", [](RunConfig& c) -> double& { return c.env.sensor.fov; }));
    f.push_back(real("sensor", "max_range", [](RunConfig& c) -> double& { return c.env.sensor.max_range; }));
    f.push_back(real("sensor", "noise_std", [](RunConfig& c) -> double& { return c.env.sensor.noise_std; }));
    // [env]
    f.push_back(real("env", "gamma", [](RunConfig& c) -> double& { return c.env.gamma; }));
    f.push_back(integer("env", "horizon", [](RunConfig& c) -> int& { return c.env.horizon; }));
    f.push_back(real("env", "footprint_radius", [](RunConfig& c) -> double& { return c.env.footprint_radius; }));
    f.push_back(real("env", "reward_goal", [](RunConfig& c) -> double& { return c.env.reward.goal; }));
    f.push_back(real("env", "reward_collision", [](RunConfig& c) -> double& { return c.env.reward.collision; }));
    f.push_back(real("env", "reward_step", [](RunConfig& c) -> double& { return c.env.reward.step; }));
    f.push_back(real("env", "reward_progress", [](RunConfig& c) -> double& { return c.env.reward.progress; }));
    // [agent]
    f.push_back({"agent", "type", [](const RunConfig& c) { return std::string(to_string(c.agent.kind)); },
                 [](RunConfig& c, const std::string& t) { c.agent.kind = agent_kind_from_string(trim(t)); }});
    f.push_back({"agent", "hidden",
                 [](const RunConfig& c) {
                   std::string s;
                   for (std::size_t i = 0; i < c.agent.hidden.size(); ++i) {
                     if (i > 0) s += ", ";
                     s += std::to_string(c.agent.hidden[i]);
                   }
                   return s;
                 },
                 [](RunConfig& c, const std::string& t) {
                   c.agent.hidden.clear();
                   for (const std::string& p : split(t, ',')) c.agent.hidden.push_back(parse_int<int>("agent.hidden", p));
                 }});
    f.push_back(real("agent", "lr", [](RunConfig& c) -> double& { return c.agent.lr; }));
    f.push_back(real("agent", "tau", [](RunConfig& c) -> double& { return c.agent.tau; }));
    f.push_back(integer("agent", "batch_size", [](RunConfig& c) -> int& { return c.agent.batch_size; }));
    f.push_back(integer("agent", "buffer_capacity", [](RunConfig& c) -> std::size_t& { return c.agent.buffer_capacity; }));
    f.push_back(real("agent", "target_entropy", [](RunConfig& c) -> double& { return c.agent.target_entropy; }));
    f.push_back(real("agent", "init_alpha", [](RunConfig& c) -> double& { return c.agent.init_alpha; }));
    f.push_back(boolean("agent", "auto_alpha", [](RunConfig& c) -> bool& { return c.agent.auto_alpha; }));
    f.push_back(real("agent", "log_std_min", [](RunConfig& c) -> double& { return c.agent.log_std_min; }));
    f.push_back(real("agent", "log_std_max", [](RunConfig& c) -> double& { return c.agent.log_std_max; }));
    f.push_back(real("agent", "exploration_noise", [](RunConfig& c) -> double& { return c.agent.exploration_noise; }));
    f.push_back(real("agent", "target_noise", [](RunConfig& c) -> double& { return c.agent.target_noise; }));
    f.push_back(real("agent", "target_noise_clip", [](RunConfig& c) -> double& { return c.agent.target_noise_clip; }));
    f.push_back(integer("agent", "policy_delay", [](RunConfig& c) -> int& { return c.agent.policy_delay; }));
    f.push_back(integer("agent", "warmup_steps", [](RunConfig& c) -> int& { return c.agent.warmup_steps; }));
    f.push_back(real("agent", "updates_per_step", [](RunConfig& c) -> double& { return c.agent.updates_per_step; }));
    // [trainer]
    f.push_back(integer("trainer", "workers", [](RunConfig& c) -> int& { return c.trainer.workers; }));
    f.push_back(integer("trainer", "steps", [](RunConfig& c) -> std::uint64_t& { return c.trainer.steps; }));
    f.push_back(integer("trainer", "checkpoint_every", [](RunConfig& c) -> std::uint64_t& { return c.trainer.checkpoint_every; }));
    f.push_back(integer("trainer", "log_every", [](RunConfig& c) -> std::uint64_t& { return c.trainer.log_every; }));
    f.push_back(integer("trainer", "seed", [](RunConfig& c) -> std::uint64_t& { return c.trainer.seed; }));
    f.push_back(text("trainer", "out", [](RunConfig& c) -> std::string& { return c.trainer.out; }));
    f.push_back(integer("trainer", "metrics_window", [](RunConfig& c) -> int& { return c.trainer.metrics_window; }));
    f.push_back(integer("trainer", "max_lag", [](RunConfig& c) -> std::uint64_t& { return c.trainer.max_lag; }));
    // [eval]
    f.push_back(integer("eval", "episodes", [](RunConfig& c) -> int& { return c.eval.episodes; }));
    f.push_back(integer("eval", "seed", [](RunConfig& c) -> std::uint64_t& { return c.eval.seed; }));
    return f;
  }();
  return table;
}

const std::vector<std::string>& section_order() {
  static const std::vector<std::string> order{"vessel", "world", "sensor", "env", "agent", "trainer", "eval"};
  return order;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const Field& f : fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

void set_value(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value) {
  const Field* f = find_field(section, key);
  if (f == nullptr) throw InvalidConfig("config: unknown key '" + section + "." + key + "'");
  f->set(cfg, value);
}

void apply_ini(RunConfig& cfg, std::istream& in, const std::string& origin) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidConfig("config: cannot parse " + origin + ": " + e.message() + " (line " +
                        std::to_string(e.line()) + ")");
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw InvalidConfig("config: key '" + section + "' outside any [section] in " + origin);
    for (const auto& [key, value] : body) set_value(cfg, section, key, value.data());
  }
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw InvalidConfig("config: override '" + o + "' must look like section.key=value");
    }
    set_value(cfg, trim(o.substr(0, dot)), trim(o.substr(dot + 1, eq - dot - 1)), o.substr(eq + 1));
  }
}

std::string render(const RunConfig& cfg, bool hashed_only) {
  std::string out;
  for (const std::string& section : section_order()) {
    if (hashed_only && (section == "trainer" || section == "eval")) continue;
    out += "[" + section + "]\n";
    for (const Field& f : fields()) {
      if (f.section == section) out += f.key + " = " + f.get(cfg) + "\n";
    }
    out += "\n";
  }
  return out;
}

RunConfig finish(RunConfig cfg) {
  cfg.agent.gamma = cfg.env.gamma;
  validate(cfg);
  return cfg;
}

}  // namespace

void validate(const TrainerConfig& t) {
  if (t.workers < 1) throw InvalidConfig("trainer: workers must be >= 1");
  if (t.checkpoint_every < 1) throw InvalidConfig("trainer: checkpoint_every must be >= 1");
  if (t.log_every < 1) throw InvalidConfig("trainer: log_every must be >= 1");
  if (t.metrics_window < 1) throw InvalidConfig("trainer: metrics_window must be >= 1");
  if (t.max_lag < 1) throw InvalidConfig("trainer: max_lag must be >= 1");
}

void validate(const RunConfig& cfg) {
  validate(cfg.env);
  validate(cfg.agent);
  validate(cfg.trainer);
  if (cfg.eval.episodes < 1) throw InvalidConfig("eval: episodes must be >= 1");
}

RunConfig load_config(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides,
                      bool read_env) {
  RunConfig cfg;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw InvalidConfig("config: cannot read " + path->string());
    apply_ini(cfg, in, path->string());
  }
  if (read_env) {
    if (const char* out = std::getenv(kOutDirEnv); out != nullptr && *out != '\0') cfg.trainer.out = out;
  }
  apply_overrides(cfg, overrides);
  return finish(std::move(cfg));
}

RunConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  std::istringstream in(ini_text);
  apply_ini(cfg, in, "embedded config");
  apply_overrides(cfg, overrides);
  return finish(std::move(cfg));
}

std::string to_ini(const RunConfig& cfg) { return render(cfg, false); }

std::string config_hash(const RunConfig& cfg) {
  const std::string text = render(cfg, true);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

EnvConfig load_env_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  return load_config(path, overrides, false).env;
}

}  // namespace portnav
