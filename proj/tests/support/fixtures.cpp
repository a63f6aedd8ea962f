#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "portnav/checkpoint.hpp"

namespace fixture {

WorldScene open_water(double width, double height) {
  WorldScene s;
  s.bounds = {{0.0, 0.0}, {width, height}};
  s.wall_segments = rect_edges(s.bounds);
  s.goal = {{width / 2.0, height - 20.0}, 5.0};
  s.spawn_pose = {width / 2.0, 20.0, 0.0, 0.0, 0.0};
  return s;
}

VesselState clear_pose(const WorldScene& scene, std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> ux(scene.bounds.min.x, scene.bounds.max.x);
  std::uniform_real_distribution<double> uy(scene.bounds.min.y, scene.bounds.max.y);
  std::uniform_real_distribution<double> uh(0.0, 360.0);
  for (;;) {
    const Vec2 p{ux(rng), uy(rng)};
    if (!check_collision(scene, p, radius)) return {p.x, p.y, uh(rng), 0.0, 0.0};
  }
}

namespace {

Vec2 turn(Vec2 p, Vec2 c, double degrees) {
  const double q = degrees / 90.0;
  const Vec2 v = p - c;
  if (q == std::floor(q)) {
    Vec2 r = v;
    const int k = ((static_cast<int>(q) % 4) + 4) % 4;
    for (int i = 0; i < k; ++i) r = {r.y, -r.x};
    return c + r;
  }
  const double a = degrees * 3.14159265358979323846 / 180.0;
  return c + Vec2{v.x * std::cos(a) + v.y * std::sin(a), -v.x * std::sin(a) + v.y * std::cos(a)};
}

double snap(double v) { return std::round(v * 64.0) / 64.0; }
Vec2 snap(Vec2 v) { return {snap(v.x), snap(v.y)}; }

}  // namespace

WorldScene rotate(const WorldScene& scene, Vec2 c, double degrees) {
  WorldScene out = scene;
  const Vec2 a = turn(scene.bounds.min, c, degrees);
  const Vec2 b = turn(scene.bounds.max, c, degrees);
  out.bounds = {{std::min(a.x, b.x), std::min(a.y, b.y)}, {std::max(a.x, b.x), std::max(a.y, b.y)}};
  for (Segment& s : out.wall_segments) s = {turn(s.a, c, degrees), turn(s.b, c, degrees)};
  // Quays only matter to the sensor through their wall faces.
  out.quays.clear();
  for (Polygon& p : out.static_obstacles) {
    for (Vec2& v : p.vertices) v = turn(v, c, degrees);
  }
  for (DynamicObstacle& d : out.dynamic_obstacles) {
    for (Vec2& v : d.route) v = turn(v, c, degrees);
  }
  out.goal.center = turn(scene.goal.center, c, degrees);
  const Vec2 sp = turn({scene.spawn_pose.x, scene.spawn_pose.y}, c, degrees);
  out.spawn_pose.x = sp.x;
  out.spawn_pose.y = sp.y;
  out.spawn_pose.heading = normalize_heading(scene.spawn_pose.heading + degrees);
  return out;
}

WorldScene snap_dyadic(const WorldScene& scene) {
  WorldScene out = scene;
  out.bounds = {snap(scene.bounds.min), snap(scene.bounds.max)};
  for (Segment& s : out.wall_segments) s = {snap(s.a), snap(s.b)};
  for (Rect& q : out.quays) q = {snap(q.min), snap(q.max)};
  for (Polygon& p : out.static_obstacles) {
    for (Vec2& v : p.vertices) v = snap(v);
  }
  for (DynamicObstacle& d : out.dynamic_obstacles) {
    for (Vec2& v : d.route) v = snap(v);
    d.footprint_radius = snap(d.footprint_radius);
    d.route_progress = 0.0;
  }
  return out;
}

RunConfig near_goal_config() {
  RunConfig cfg;
  GenConfig& w = cfg.env.world;
  w.width = 200.0;
  w.height = 200.0;
  w.quay_count = {0, 0};
  w.static_count = {0, 0};
  w.dynamic_count = {0, 0};
  w.spawn_mode = SpawnMode::NearGoal;
  w.near_goal_distance = 15.0;
  w.goal_radius = 5.0;
  w.min_separation = 15.0;
  cfg.env.horizon = 100;
  cfg.agent.hidden = {64, 64};
  cfg.agent.batch_size = 64;
  cfg.agent.warmup_steps = 1000;
  cfg.trainer.workers = 1;
  cfg.eval.episodes = 50;
  return cfg;
}

RunConfig tiny_run(std::uint64_t steps, int workers, std::uint64_t seed, const std::filesystem::path& out) {
  RunConfig cfg = near_goal_config();
  cfg.agent.hidden = {16, 16};
  cfg.agent.batch_size = 16;
  cfg.agent.warmup_steps = 100;
  cfg.agent.buffer_capacity = 10000;
  cfg.trainer.steps = steps;
  cfg.trainer.workers = workers;
  cfg.trainer.seed = seed;
  cfg.trainer.log_every = 100;
  cfg.trainer.checkpoint_every = 250;
  cfg.trainer.max_lag = 64;
  cfg.trainer.out = out.string();
  return cfg;
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("portnav_test_" + std::to_string(::getpid())) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool same_learner_state(const std::filesystem::path& a, const std::filesystem::path& b) {
  const Checkpoint x = load_checkpoint(a);
  const Checkpoint y = load_checkpoint(b);
  if (x.agent != y.agent || x.config_hash != y.config_hash || x.env_steps != y.env_steps ||
      x.rng_state != y.rng_state || x.archive.scalars() != y.archive.scalars()) {
    return false;
  }
  if (x.archive.tensors().size() != y.archive.tensors().size()) return false;
  for (const auto& [name, m] : x.archive.tensors()) {
    if (!y.archive.contains(name)) return false;
    const nn::Matrix& o = y.archive.get(name);
    if (o.rows() != m.rows() || o.cols() != m.cols() || o != m) return false;
  }
  return true;
}

}  // namespace fixture
