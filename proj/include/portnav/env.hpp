#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "portnav/kinematics.hpp"
#include "portnav/sensor.hpp"
#include "portnav/world.hpp"

namespace portnav {

struct RewardConfig {
  double goal = 100.0;
  double collision = -100.0;
  double step = -0.05;     // per step
  double progress = 0.5;   // per metre of goal distance closed
};

struct EnvConfig {
  double gamma = 0.99;
  int horizon = 600;
  double footprint_radius = 4.0;  // ego disc, m
  RewardConfig reward;
  GenConfig world;
  SensorConfig sensor;
  VesselParams vessel;
};

void validate(const EnvConfig& cfg);

/// Policy input. The flat vector layout is
///   [normalized_ranges..., goal_distance, goal_bearing / 180, speed, angular_rate]
/// where every entry is already scaled to roughly [-1, 1].
struct Observation {
  std::vector<double> normalized_ranges;  // range / max_range, (0, 1]
  double goal_distance = 0.0;             // distance / scene diagonal
  double goal_bearing = 0.0;              // deg relative to heading, [-180, 180)
  double speed = 0.0;                     // speed / speed_max
  double angular_rate = 0.0;              // angular_rate / angular_rate_max

  static std::size_t size(int n_rays) { return static_cast<std::size_t>(n_rays) + 4; }
  std::vector<double> to_vector() const;
};

struct StepInfo {
  bool collision = false;
  bool goal = false;
  double distance_to_goal = 0.0;  // m
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  StepInfo info;
};

/// Compass bearing (deg) from `from` to `to`, 0 = +y.
double compass_bearing(Vec2 from, Vec2 to);

/// Sum of gamma^t * r_t.
double discounted_return(std::span<const double> rewards, double gamma);

/// One episodic port-navigation MDP. Each step: clamp the action, move traffic,
/// integrate the ego one tick, then test collision (checked first) and goal.
class Env {
 public:
  explicit Env(EnvConfig cfg);

  /// Fresh scene from `seed`; the ego starts at the spawn pose at rest.
  Observation reset(std::uint64_t seed);
  /// Starts an episode on a given scene. `noise_seed` drives sensor noise only.
  Observation reset(const WorldScene& scene, std::uint64_t noise_seed = 0);

  StepResult step(const ControlInput& action);

  /// Applies from the next step. Invalid params throw and leave the old ones.
  void set_vessel_params(const VesselParams& params);

  const EnvConfig& config() const noexcept { return cfg_; }
  const VesselParams& vessel_params() const noexcept { return kinematics_.params(); }
  const WorldScene& scene() const noexcept { return scene_; }
  const VesselState& state() const noexcept { return state_; }
  int steps() const noexcept { return t_; }
  bool done() const noexcept { return done_; }
  std::size_t observation_size() const { return Observation::size(cfg_.sensor.n_rays); }

  Observation observe();

 private:
  Observation start_episode();

  EnvConfig cfg_;
  Kinematics kinematics_;
  WorldScene scene_;
  VesselState state_;
  std::mt19937_64 noise_rng_;
  double goal_distance_ = 0.0;
  int t_ = 0;
  bool active_ = false;
  bool done_ = false;
};

}  // namespace portnav
