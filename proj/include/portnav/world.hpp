#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "portnav/geometry.hpp"
#include "portnav/kinematics.hpp"

namespace portnav {

/// Non-reactive traffic vessel that loops along a waypoint polyline at a
/// constant speed. When the route ends it continues from the first waypoint.
struct DynamicObstacle {
  double footprint_radius = 5.0;
  std::vector<Vec2> route;
  double speed = 0.0;
  double route_progress = 0.0;  // arc length from route.front(), m, in [0, route_length)

  double route_length() const { return polyline_length(route); }
  double normalized_progress() const;
  Vec2 position() const { return point_along(route, route_progress); }
  Disc disc() const { return {position(), footprint_radius}; }

  bool operator==(const DynamicObstacle&) const = default;
};

/// A port basin. Quays are solid land rectangles attached to the basin edge;
/// their exposed faces are also listed in wall_segments so that sensing only
/// needs segments, polygons and discs.
struct WorldScene {
  Rect bounds;
  std::vector<Segment> wall_segments;
  std::vector<Rect> quays;
  std::vector<Polygon> static_obstacles;
  std::vector<DynamicObstacle> dynamic_obstacles;
  Disc goal;
  VesselState spawn_pose;

  double diagonal() const { return norm(bounds.max - bounds.min); }
  bool operator==(const WorldScene&) const = default;
};

enum class SpawnMode { Random, NearGoal };

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct CountRange {
  int lo = 0;
  int hi = 0;
};

struct GenConfig {
  double width = 400.0;
  double height = 300.0;
  CountRange quay_count{2, 5};
  Range quay_width{30.0, 80.0};
  Range quay_depth{15.0, 40.0};
  CountRange static_count{3, 8};
  Range static_radius{6.0, 18.0};
  CountRange static_vertices{3, 7};
  CountRange dynamic_count{2, 4};
  Range dynamic_radius{4.0, 8.0};
  Range dynamic_speed{0.5, 3.0};
  CountRange route_waypoints{2, 4};
  double goal_radius = 10.0;
  double min_separation = 60.0;
  // Free space kept around spawn and goal, measured from their centers.
  double spawn_clearance = 15.0;
  SpawnMode spawn_mode = SpawnMode::Random;
  // Goal distance ahead of the spawn heading in NearGoal mode.
  double near_goal_distance = 15.0;
  int attempt_budget = 2000;
};

void validate(const GenConfig& cfg);

/// Deterministic in (seed, cfg). Throws GenerationFailure naming the first
/// entity that could not be placed.
WorldScene generate(std::uint64_t seed, const GenConfig& cfg);

/// Moves every dynamic obstacle `speed * dt` metres along its route.
void advance_dynamics(WorldScene& scene, double dt);

/// Closed-disc test against walls, quays, static polygons, traffic, and the
/// basin bounds (any part of the disc outside the bounds counts).
bool check_collision(const WorldScene& scene, Vec2 position, double footprint_radius);
bool check_collision(const WorldScene& scene, const VesselState& pose, double footprint_radius);

/// Closed goal disc.
bool check_goal(const WorldScene& scene, const VesselState& pose);

/// Smallest distance from `p` to any solid geometry (walls, quays, static
/// polygons); zero when inside a quay or polygon. Traffic is not included.
double static_clearance(const WorldScene& scene, Vec2 p);

}  // namespace portnav
