#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "portnav/env.hpp"

namespace portnav {

// JSON-lines trajectory log, one object per line:
//   {"type":"header","schema":"portnav-trajectory","version":1,"config_hash":"<hex>"}
//   {"type":"episode_start","episode":k,"seed":s,"vessel":{...},"pose":{...}}
//   {"type":"step","episode":k,"t":i,"pose":{...},"action":{"thrust":,"rudder":},
//    "reward":r,"terminated":b,"truncated":b,"collision":b,"goal":b}
//   {"type":"episode_end","episode":k,"return":R,"length":n,"outcome":"goal|collision|timeout"}
// "t" counts completed steps (1-based); "pose" is the state after the step.

inline constexpr int kTrajectorySchemaVersion = 1;

struct StepRecord {
  int t = 0;
  VesselState pose;
  ControlInput action;  // as applied, i.e. after clamping
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  bool collision = false;
  bool goal = false;
};

enum class Outcome { Goal, Collision, Timeout };
const char* to_string(Outcome o);
Outcome outcome_from_string(const std::string& s);

struct EpisodeRecord {
  std::uint64_t episode = 0;
  std::uint64_t seed = 0;
  VesselParams vessel;
  VesselState initial_pose;
  std::vector<StepRecord> steps;
  double episode_return = 0.0;  // undiscounted
  Outcome outcome = Outcome::Timeout;

  int length() const { return static_cast<int>(steps.size()); }
};

/// Accumulates one episode while an Env is stepped.
class EpisodeRecorder {
 public:
  void begin(std::uint64_t episode, std::uint64_t seed, const Env& env);
  void record(const Env& env, const ControlInput& applied, const StepResult& res);
  const EpisodeRecord& record() const noexcept { return rec_; }
  EpisodeRecord take() { return std::move(rec_); }

 private:
  EpisodeRecord rec_;
};

/// Serialized sink; safe to call from several rollout threads.
class TrajectoryLogWriter {
 public:
  TrajectoryLogWriter(const std::filesystem::path& path, const std::string& config_hash);
  void write(const EpisodeRecord& episode);
  void flush();

 private:
  std::mutex mu_;
  std::ofstream out_;
};

struct TrajectoryLog {
  std::string config_hash;
  std::vector<EpisodeRecord> episodes;
};

TrajectoryLog read_trajectory_log(const std::filesystem::path& path);

/// First place where a re-simulation departs from the log. t = 0 refers to
/// the initial pose.
struct ReplayMismatch {
  std::uint64_t episode = 0;
  int t = 0;
  std::string field;
  std::string detail;
};

/// Re-runs the logged actions on a fresh Env and compares every pose, reward
/// and flag bit for bit. The scene is regenerated from the logged seed unless
/// `scene` is given.
std::optional<ReplayMismatch> replay_episode(const EnvConfig& cfg, const EpisodeRecord& rec,
                                             const WorldScene* scene = nullptr);

}  // namespace portnav
