#include "portnav/env.hpp"

#include <cmath>
#include <numbers>

#include "portnav/errors.hpp"

namespace portnav {

void validate(const EnvConfig& cfg) {
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) throw InvalidConfig("env: gamma must be in (0, 1)");
  if (cfg.horizon < 1) throw InvalidConfig("env: horizon must be >= 1");
  if (!(std::isfinite(cfg.footprint_radius) && cfg.footprint_radius > 0.0)) {
    throw InvalidConfig("env: footprint_radius must be > 0");
  }
  const RewardConfig& r = cfg.reward;
  if (!(std::isfinite(r.goal) && std::isfinite(r.collision) && std::isfinite(r.step) && std::isfinite(r.progress))) {
    throw InvalidConfig("env: reward constants must be finite");
  }
  validate(cfg.world);
  validate(cfg.sensor);
  validate(cfg.vessel);
}

std::vector<double> Observation::to_vector() const {
  std::vector<double> v;
  v.reserve(normalized_ranges.size() + 4);
  v.insert(v.end(), normalized_ranges.begin(), normalized_ranges.end());
  v.push_back(goal_distance);
  v.push_back(goal_bearing / 180.0);
  v.push_back(speed);
  v.push_back(angular_rate);
  return v;
}

double compass_bearing(Vec2 from, Vec2 to) {
  const Vec2 d = to - from;
  return std::atan2(d.x, d.y) * (180.0 / std::numbers::pi);
}

double discounted_return(std::span<const double> rewards, double gamma) {
  // Horner form from the back: r0 + g(r1 + g(r2 + ...)).
  double acc = 0.0;
  for (auto it = rewards.rbegin(); it != rewards.rend(); ++it) acc = *it + gamma * acc;
  return acc;
}

Env::Env(EnvConfig cfg) : cfg_(std::move(cfg)), kinematics_(cfg_.vessel) { validate(cfg_); }

Observation Env::reset(std::uint64_t seed) {
  scene_ = generate(seed, cfg_.world);
  noise_rng_.seed(seed);
  return start_episode();
}

Observation Env::reset(const WorldScene& scene, std::uint64_t noise_seed) {
  scene_ = scene;
  noise_rng_.seed(noise_seed);
  return start_episode();
}

Observation Env::start_episode() {
  state_ = scene_.spawn_pose;
  state_.speed = 0.0;
  state_.angular_rate = 0.0;
  state_.heading = normalize_heading(state_.heading);
  goal_distance_ = norm(Vec2{state_.x, state_.y} - scene_.goal.center);
  t_ = 0;
  active_ = true;
  done_ = false;
  return observe();
}

Observation Env::observe() {
  const VesselParams& p = kinematics_.params();
  Observation obs;
  const RangeScan s = scan(scene_, state_, cfg_.sensor, cfg_.sensor.noise_std > 0.0 ? &noise_rng_ : nullptr);
  obs.normalized_ranges.reserve(s.ranges.size());
  for (double r : s.ranges) obs.normalized_ranges.push_back(r / cfg_.sensor.max_range);
  const Vec2 pos{state_.x, state_.y};
  obs.goal_distance = norm(scene_.goal.center - pos) / scene_.diagonal();
  obs.goal_bearing = wrap_bearing(compass_bearing(pos, scene_.goal.center) - state_.heading);
  obs.speed = state_.speed / p.speed_max;
  obs.angular_rate = state_.angular_rate / p.angular_rate_max;
  return obs;
}

StepResult Env::step(const ControlInput& action) {
  if (!active_) throw UsageError("env: step called before reset");
  if (done_) throw UsageError("env: step called after the episode finished; call reset");
  const ControlInput u = clamp(action, kinematics_.params());

  advance_dynamics(scene_, kinematics_.params().dt);
  state_ = kinematics_.step(state_, u);
  ++t_;

  StepResult res;
  const double new_distance = norm(Vec2{state_.x, state_.y} - scene_.goal.center);
  res.info.distance_to_goal = new_distance;
  res.info.collision = check_collision(scene_, state_, cfg_.footprint_radius);
  res.info.goal = !res.info.collision && check_goal(scene_, state_);
  if (res.info.collision) {
    res.reward = cfg_.reward.collision;
    res.terminated = true;
  } else if (res.info.goal) {
    res.reward = cfg_.reward.goal;
    res.terminated = true;
  } else {
    res.reward = cfg_.reward.step + cfg_.reward.progress * (goal_distance_ - new_distance);
  }
  res.truncated = !res.terminated && t_ >= cfg_.horizon;
  goal_distance_ = new_distance;
  done_ = res.terminated || res.truncated;
  res.observation = observe();
  return res;
}

void Env::set_vessel_params(const VesselParams& params) { kinematics_.set_params(params); }

}  // namespace portnav
