#include "portnav/trajectory_log.hpp"

#include <cstdio>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "portnav/errors.hpp"
#include "portnav/scene_io.hpp"

namespace portnav {

using nlohmann::json;

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Goal: return "goal";
    case Outcome::Collision: return "collision";
    default: return "timeout";
  }
}

Outcome outcome_from_string(const std::string& s) {
  if (s == "goal") return Outcome::Goal;
  if (s == "collision") return Outcome::Collision;
  if (s == "timeout") return Outcome::Timeout;
  throw InvalidConfig("unknown episode outcome '" + s + "'");
}

void EpisodeRecorder::begin(std::uint64_t episode, std::uint64_t seed, const Env& env) {
  rec_ = {};
  rec_.episode = episode;
  rec_.seed = seed;
  rec_.vessel = env.vessel_params();
  rec_.initial_pose = env.state();
}

void EpisodeRecorder::record(const Env& env, const ControlInput& applied, const StepResult& res) {
  StepRecord s;
  s.t = env.steps();
  s.pose = env.state();
  s.action = applied;
  s.reward = res.reward;
  s.terminated = res.terminated;
  s.truncated = res.truncated;
  s.collision = res.info.collision;
  s.goal = res.info.goal;
  rec_.steps.push_back(s);
  rec_.episode_return += res.reward;
  if (res.info.collision) rec_.outcome = Outcome::Collision;
  else if (res.info.goal) rec_.outcome = Outcome::Goal;
}

namespace {

json vessel_json(const VesselParams& p) {
  return {{"mass", p.mass},           {"turn_rate", p.turn_rate},
          {"thrust_max", p.thrust_max}, {"speed_max", p.speed_max},
          {"angular_rate_max", p.angular_rate_max}, {"dt", p.dt}};
}

VesselParams vessel_from_json(const json& j) {
  return {j.at("mass").get<double>(),      j.at("turn_rate").get<double>(),
          j.at("thrust_max").get<double>(), j.at("speed_max").get<double>(),
          j.at("angular_rate_max").get<double>(), j.at("dt").get<double>()};
}

}  // namespace

TrajectoryLogWriter::TrajectoryLogWriter(const std::filesystem::path& path, const std::string& config_hash)
    : out_(path) {
  if (!out_) throw std::runtime_error("cannot write trajectory log " + path.string());
  out_ << json{{"type", "header"},
               {"schema", "portnav-trajectory"},
               {"version", kTrajectorySchemaVersion},
               {"config_hash", config_hash}}
              .dump()
       << '\n';
}

void TrajectoryLogWriter::write(const EpisodeRecord& ep) {
  std::lock_guard lock(mu_);
  out_ << json{{"type", "episode_start"},
               {"episode", ep.episode},
               {"seed", ep.seed},
               {"vessel", vessel_json(ep.vessel)},
               {"pose", to_json(ep.initial_pose)}}
              .dump()
       << '\n';
  for (const StepRecord& s : ep.steps) {
    out_ << json{{"type", "step"},
                 {"episode", ep.episode},
                 {"t", s.t},
                 {"pose", to_json(s.pose)},
                 {"action", {{"thrust", s.action.thrust}, {"rudder", s.action.rudder}}},
                 {"reward", s.reward},
                 {"terminated", s.terminated},
                 {"truncated", s.truncated},
                 {"collision", s.collision},
                 {"goal", s.goal}}
                .dump()
         << '\n';
  }
  out_ << json{{"type", "episode_end"},
               {"episode", ep.episode},
               {"return", ep.episode_return},
               {"length", ep.length()},
               {"outcome", to_string(ep.outcome)}}
              .dump()
       << '\n';
}

void TrajectoryLogWriter::flush() {
  std::lock_guard lock(mu_);
  out_.flush();
}

TrajectoryLog read_trajectory_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read trajectory log " + path.string());
  TrajectoryLog log;
  std::map<std::uint64_t, std::size_t> index;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const json j = json::parse(line);
    const std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      if (j.at("version").get<int>() != kTrajectorySchemaVersion) {
        throw InvalidConfig("trajectory log: unsupported version " + j.at("version").dump());
      }
      log.config_hash = j.at("config_hash").get<std::string>();
      header = true;
      continue;
    }
    if (!header) throw InvalidConfig("trajectory log: missing header record");
    const auto id = j.at("episode").get<std::uint64_t>();
    if (type == "episode_start") {
      EpisodeRecord ep;
      ep.episode = id;
      ep.seed = j.at("seed").get<std::uint64_t>();
      ep.vessel = vessel_from_json(j.at("vessel"));
      ep.initial_pose = state_from_json(j.at("pose"));
      index[id] = log.episodes.size();
      log.episodes.push_back(std::move(ep));
      continue;
    }
    const auto it = index.find(id);
    if (it == index.end()) {
      throw InvalidConfig("trajectory log line " + std::to_string(lineno) + ": episode without start record");
    }
    EpisodeRecord& ep = log.episodes[it->second];
    if (type == "step") {
      StepRecord s;
      s.t = j.at("t").get<int>();
      s.pose = state_from_json(j.at("pose"));
      s.action = {j.at("action").at("thrust").get<double>(), j.at("action").at("rudder").get<double>()};
      s.reward = j.at("reward").get<double>();
      s.terminated = j.at("terminated").get<bool>();
      s.truncated = j.at("truncated").get<bool>();
      s.collision = j.at("collision").get<bool>();
      s.goal = j.at("goal").get<bool>();
      ep.steps.push_back(s);
    } else if (type == "episode_end") {
      ep.episode_return = j.at("return").get<double>();
      ep.outcome = outcome_from_string(j.at("outcome").get<std::string>());
    } else {
      throw InvalidConfig("trajectory log line " + std::to_string(lineno) + ": unknown record type " + type);
    }
  }
  return log;
}

}  // namespace portnav

namespace portnav {

namespace {

std::string pose_text(const VesselState& s) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "(x=%.17g, y=%.17g, heading=%.17g, speed=%.17g, angular_rate=%.17g)", s.x, s.y,
                s.heading, s.speed, s.angular_rate);
  return buf;
}

}  // namespace

std::optional<ReplayMismatch> replay_episode(const EnvConfig& cfg, const EpisodeRecord& rec, const WorldScene* scene) {
  Env env(cfg);
  if (scene != nullptr) env.reset(*scene, rec.seed);
  else env.reset(rec.seed);
  env.set_vessel_params(rec.vessel);
  auto mismatch = [&](int t, std::string field, std::string detail) {
    return ReplayMismatch{rec.episode, t, std::move(field), std::move(detail)};
  };
  if (!(env.state() == rec.initial_pose)) {
    return mismatch(0, "pose", "logged " + pose_text(rec.initial_pose) + ", simulated " + pose_text(env.state()));
  }
  for (const StepRecord& s : rec.steps) {
    if (env.done()) return mismatch(s.t, "length", "simulation ended before the logged step");
    const StepResult res = env.step(s.action);
    if (!(env.state() == s.pose)) {
      return mismatch(s.t, "pose", "logged " + pose_text(s.pose) + ", simulated " + pose_text(env.state()));
    }
    if (res.reward != s.reward) return mismatch(s.t, "reward", "reward differs");
    if (res.terminated != s.terminated || res.truncated != s.truncated || res.info.collision != s.collision ||
        res.info.goal != s.goal) {
      return mismatch(s.t, "flags", "termination flags differ");
    }
  }
  if (!env.done()) {
    return mismatch(static_cast<int>(rec.steps.size()), "length", "log ends before the simulated episode does");
  }
  return std::nullopt;
}

}  // namespace portnav
