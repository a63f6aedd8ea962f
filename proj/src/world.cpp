#include "portnav/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "portnav/errors.hpp"

namespace portnav {

double DynamicObstacle::normalized_progress() const {
  const double len = route_length();
  return len > 0.0 ? route_progress / len : 0.0;
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidConfig("world config: " + msg);
}

void require_range(Range r, const char* name) {
  require(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo >= 0.0 && r.lo <= r.hi,
          std::string(name) + " must be a non-negative, non-empty range");
}

void require_count(CountRange r, const char* name) {
  require(r.lo >= 0 && r.lo <= r.hi, std::string(name) + " must be a non-negative, non-empty range");
}

double distance_to_rect(Vec2 p, const Rect& r) {
  const double dx = std::max({r.min.x - p.x, 0.0, p.x - r.max.x});
  const double dy = std::max({r.min.y - p.y, 0.0, p.y - r.max.y});
  return std::hypot(dx, dy);
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) {
    if (lo == hi) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double uniform(Range r) { return uniform(r.lo, r.hi); }
  int integer(CountRange r) { return std::uniform_int_distribution<int>(r.lo, r.hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

// Quays hug one basin edge and stick `depth` metres into the water.
Rect make_quay(const Rect& bounds, int side, double offset, double width, double depth) {
  switch (side) {
    case 0: return {{bounds.min.x + offset, bounds.min.y}, {bounds.min.x + offset + width, bounds.min.y + depth}};
    case 1: return {{bounds.max.x - depth, bounds.min.y + offset}, {bounds.max.x, bounds.min.y + offset + width}};
    case 2: return {{bounds.min.x + offset, bounds.max.y - depth}, {bounds.min.x + offset + width, bounds.max.y}};
    default: return {{bounds.min.x, bounds.min.y + offset}, {bounds.min.x + depth, bounds.min.y + offset + width}};
  }
}

// Faces of a quay that are exposed to water (the edge on the basin wall is not).
std::vector<Segment> exposed_faces(const Rect& quay, const Rect& bounds) {
  std::vector<Segment> out;
  for (const Segment& e : rect_edges(quay)) {
    const bool on_bottom = e.a.y == bounds.min.y && e.b.y == bounds.min.y;
    const bool on_top = e.a.y == bounds.max.y && e.b.y == bounds.max.y;
    const bool on_left = e.a.x == bounds.min.x && e.b.x == bounds.min.x;
    const bool on_right = e.a.x == bounds.max.x && e.b.x == bounds.max.x;
    if (!(on_bottom || on_top || on_left || on_right)) out.push_back(e);
  }
  return out;
}

bool rects_overlap(const Rect& a, const Rect& b, double gap) {
  return a.min.x < b.max.x + gap && b.min.x < a.max.x + gap && a.min.y < b.max.y + gap &&
         b.min.y < a.max.y + gap;
}

struct Circle {
  Vec2 c;
  double r;
};

Polygon random_convex(Sampler& s, Vec2 center, double radius, int vertices) {
  // Points on a circle at sorted angles form a convex polygon. Angles are
  // jittered inside equal sectors so no two vertices coincide.
  Polygon poly;
  const double sector = 2.0 * std::numbers::pi / vertices;
  for (int i = 0; i < vertices; ++i) {
    const double a = sector * (i + s.uniform(0.15, 0.85));
    poly.vertices.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return poly;
}

}  // namespace

void validate(const GenConfig& cfg) {
  require(std::isfinite(cfg.width) && cfg.width > 0.0, "width must be > 0");
  require(std::isfinite(cfg.height) && cfg.height > 0.0, "height must be > 0");
  require_count(cfg.quay_count, "quay_count");
  require_range(cfg.quay_width, "quay_width");
  require_range(cfg.quay_depth, "quay_depth");
  require_count(cfg.static_count, "static_count");
  require_range(cfg.static_radius, "static_radius");
  require_count(cfg.static_vertices, "static_vertices");
  require(cfg.static_count.hi == 0 || cfg.static_vertices.lo >= 3, "static_vertices must be >= 3");
  require(cfg.static_count.hi == 0 || cfg.static_radius.lo > 0.0, "static_radius must be > 0");
  require_count(cfg.dynamic_count, "dynamic_count");
  require_range(cfg.dynamic_radius, "dynamic_radius");
  require(cfg.dynamic_count.hi == 0 || cfg.dynamic_radius.lo > 0.0, "dynamic_radius must be > 0");
  require_range(cfg.dynamic_speed, "dynamic_speed");
  require_count(cfg.route_waypoints, "route_waypoints");
  require(cfg.route_waypoints.lo >= 2, "route_waypoints must be >= 2");
  require(std::isfinite(cfg.goal_radius) && cfg.goal_radius > 0.0, "goal_radius must be > 0");
  require(std::isfinite(cfg.min_separation) && cfg.min_separation >= 0.0, "min_separation must be >= 0");
  require(std::isfinite(cfg.spawn_clearance) && cfg.spawn_clearance >= 0.0, "spawn_clearance must be >= 0");
  require(std::isfinite(cfg.near_goal_distance) && cfg.near_goal_distance > 0.0,
          "near_goal_distance must be > 0");
  require(cfg.spawn_mode != SpawnMode::NearGoal || cfg.near_goal_distance >= cfg.min_separation,
          "near_goal_distance must be >= min_separation");
  require(cfg.attempt_budget > 0, "attempt_budget must be > 0");
}

double static_clearance(const WorldScene& scene, Vec2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const Segment& s : scene.wall_segments) best = std::min(best, point_segment_distance(p, s));
  for (const Rect& q : scene.quays) best = std::min(best, distance_to_rect(p, q));
  for (const Polygon& poly : scene.static_obstacles) {
    if (point_in_polygon(p, poly)) return 0.0;
    best = std::min(best, point_polygon_distance(p, poly));
  }
  return best;
}

WorldScene generate(std::uint64_t seed, const GenConfig& cfg) {
  validate(cfg);
  Sampler s(seed);
  WorldScene scene;
  scene.bounds = {{0.0, 0.0}, {cfg.width, cfg.height}};
  scene.wall_segments = rect_edges(scene.bounds);
  const Rect& b = scene.bounds;

  auto fail = [](const std::string& entity) {
    throw GenerationFailure(entity, "world generation: could not place " + entity);
  };

  const int n_quays = s.integer(cfg.quay_count);
  for (int i = 0; i < n_quays; ++i) {
    std::optional<Rect> placed;
    for (int attempt = 0; attempt < cfg.attempt_budget && !placed; ++attempt) {
      const int side = s.integer({0, 3});
      const double edge_len = (side % 2 == 0) ? b.width() : b.height();
      const double across = (side % 2 == 0) ? b.height() : b.width();
      const double width = s.uniform(cfg.quay_width);
      const double depth = s.uniform(cfg.quay_depth);
      // Keep quays away from corners and from the far half of the basin.
      if (width + 2.0 * depth > edge_len || depth >= 0.4 * across) continue;
      const double offset = s.uniform(depth, edge_len - depth - width);
      const Rect quay = make_quay(b, side, offset, width, depth);
      bool ok = true;
      for (const Rect& q : scene.quays) ok = ok && !rects_overlap(quay, q, 2.0 * cfg.spawn_clearance);
      if (ok) placed = quay;
    }
    if (!placed) fail("quay[" + std::to_string(i) + "]");
    scene.quays.push_back(*placed);
    for (const Segment& f : exposed_faces(*placed, b)) scene.wall_segments.push_back(f);
  }

  const int n_static = s.integer(cfg.static_count);
  std::vector<Circle> static_circles;
  for (int i = 0; i < n_static; ++i) {
    std::optional<Polygon> placed;
    for (int attempt = 0; attempt < cfg.attempt_budget && !placed; ++attempt) {
      const double r = s.uniform(cfg.static_radius);
      const double margin = r + cfg.spawn_clearance;
      if (2.0 * margin >= b.width() || 2.0 * margin >= b.height()) continue;
      const Vec2 c{s.uniform(b.min.x + margin, b.max.x - margin), s.uniform(b.min.y + margin, b.max.y - margin)};
      bool ok = true;
      for (const Rect& q : scene.quays) ok = ok && distance_to_rect(c, q) > margin;
      for (const Circle& o : static_circles) ok = ok && norm(c - o.c) > r + o.r + cfg.spawn_clearance;
      if (!ok) continue;
      placed = random_convex(s, c, r, s.integer(cfg.static_vertices));
      static_circles.push_back({c, r});
    }
    if (!placed) fail("static_obstacle[" + std::to_string(i) + "]");
    scene.static_obstacles.push_back(std::move(*placed));
  }

  // Spawn and goal keep `spawn_clearance` free space and stay inside the basin.
  auto clear_point = [&](Vec2 p, double clearance) {
    if (p.x < b.min.x + clearance || p.x > b.max.x - clearance || p.y < b.min.y + clearance ||
        p.y > b.max.y - clearance) {
      return false;
    }
    return static_clearance(scene, p) >= clearance;
  };
  const double goal_clearance = std::max(cfg.spawn_clearance, cfg.goal_radius);

  bool placed_pair = false;
  bool spawn_found = false;
  for (int attempt = 0; attempt < cfg.attempt_budget && !placed_pair; ++attempt) {
    const Vec2 spawn{s.uniform(b.min.x, b.max.x), s.uniform(b.min.y, b.max.y)};
    const double heading = normalize_heading(s.uniform(0.0, 360.0));
    if (!clear_point(spawn, cfg.spawn_clearance)) continue;
    spawn_found = true;
    if (cfg.spawn_mode == SpawnMode::NearGoal) {
      const Vec2 goal = spawn + cfg.near_goal_distance * compass_direction(heading);
      if (!clear_point(goal, goal_clearance)) continue;
      scene.spawn_pose = {spawn.x, spawn.y, heading, 0.0, 0.0};
      scene.goal = {goal, cfg.goal_radius};
      placed_pair = true;
      break;
    }
    for (int g = 0; g < 20 && !placed_pair; ++g) {
      const Vec2 goal{s.uniform(b.min.x, b.max.x), s.uniform(b.min.y, b.max.y)};
      if (norm(goal - spawn) < cfg.min_separation || !clear_point(goal, goal_clearance)) continue;
      scene.spawn_pose = {spawn.x, spawn.y, heading, 0.0, 0.0};
      scene.goal = {goal, cfg.goal_radius};
      placed_pair = true;
    }
  }
  if (!placed_pair) fail(spawn_found ? "goal" : "spawn");

  const Vec2 spawn_xy{scene.spawn_pose.x, scene.spawn_pose.y};
  const int n_dynamic = s.integer(cfg.dynamic_count);
  for (int i = 0; i < n_dynamic; ++i) {
    std::optional<DynamicObstacle> placed;
    for (int attempt = 0; attempt < cfg.attempt_budget && !placed; ++attempt) {
      DynamicObstacle obs;
      obs.footprint_radius = s.uniform(cfg.dynamic_radius);
      obs.speed = s.uniform(cfg.dynamic_speed);
      const double m = obs.footprint_radius;
      if (2.0 * m >= b.width() || 2.0 * m >= b.height()) continue;
      const int n_wp = s.integer(cfg.route_waypoints);
      for (int k = 0; k < n_wp; ++k) {
        obs.route.push_back({s.uniform(b.min.x + m, b.max.x - m), s.uniform(b.min.y + m, b.max.y - m)});
      }
      // Close the loop so traffic does not jump back to the start.
      obs.route.push_back(obs.route.front());
      const double len = obs.route_length();
      if (len <= 0.0) continue;
      obs.route_progress = s.uniform(0.0, len);
      if (obs.route_progress >= len) obs.route_progress = 0.0;
      if (norm(obs.position() - spawn_xy) < cfg.spawn_clearance + m) continue;
      placed = std::move(obs);
    }
    if (!placed) fail("dynamic_obstacle[" + std::to_string(i) + "]");
    scene.dynamic_obstacles.push_back(std::move(*placed));
  }
  return scene;
}

void advance_dynamics(WorldScene& scene, double dt) {
  if (!(dt > 0.0)) throw InvalidState("advance_dynamics: dt must be > 0");
  for (DynamicObstacle& o : scene.dynamic_obstacles) {
    if (o.speed == 0.0) continue;
    const double len = o.route_length();
    if (len <= 0.0) continue;
    o.route_progress = std::fmod(o.route_progress + o.speed * dt, len);
  }
}

bool check_collision(const WorldScene& scene, Vec2 p, double r) {
  const Rect& b = scene.bounds;
  if (p.x - r < b.min.x || p.x + r > b.max.x || p.y - r < b.min.y || p.y + r > b.max.y) return true;
  for (const Segment& s : scene.wall_segments) {
    if (point_segment_distance(p, s) <= r) return true;
  }
  for (const Rect& q : scene.quays) {
    if (distance_to_rect(p, q) <= r) return true;
  }
  for (const Polygon& poly : scene.static_obstacles) {
    if (point_in_polygon(p, poly) || point_polygon_distance(p, poly) <= r) return true;
  }
  for (const DynamicObstacle& o : scene.dynamic_obstacles) {
    if (norm(o.position() - p) <= r + o.footprint_radius) return true;
  }
  return false;
}

bool check_collision(const WorldScene& scene, const VesselState& pose, double r) {
  return check_collision(scene, Vec2{pose.x, pose.y}, r);
}

bool check_goal(const WorldScene& scene, const VesselState& pose) {
  return norm(Vec2{pose.x, pose.y} - scene.goal.center) <= scene.goal.radius;
}

}  // namespace portnav
