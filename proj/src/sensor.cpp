#include "portnav/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "portnav/errors.hpp"

namespace portnav {
namespace {

// Smallest range a noisy return is clamped to.
constexpr double kMinRange = 1e-6;

}  // namespace

void validate(const SensorConfig& cfg) {
  if (cfg.n_rays < 1) throw InvalidConfig("sensor: n_rays must be >= 1");
  if (!(cfg.fov > 0.0 && cfg.fov <= 360.0)) throw InvalidConfig("sensor: fov must be in (0, 360]");
  if (!(std::isfinite(cfg.max_range) && cfg.max_range > 0.0)) throw InvalidConfig("sensor: max_range must be > 0");
  if (!(std::isfinite(cfg.noise_std) && cfg.noise_std >= 0.0)) throw InvalidConfig("sensor: noise_std must be >= 0");
}

double ray_offset(const SensorConfig& cfg, int i) {
  if (cfg.n_rays == 1) return 0.0;
  if (cfg.fov == 360.0) return -180.0 + i * (360.0 / cfg.n_rays);
  return -cfg.fov / 2.0 + i * (cfg.fov / (cfg.n_rays - 1));
}

RangeScan scan(const WorldScene& scene, const VesselState& pose, const SensorConfig& cfg, std::mt19937_64* rng) {
  const Vec2 origin{pose.x, pose.y};
  std::vector<Disc> traffic;
  traffic.reserve(scene.dynamic_obstacles.size());
  for (const DynamicObstacle& o : scene.dynamic_obstacles) traffic.push_back(o.disc());

  RangeScan out;
  out.ranges.resize(cfg.n_rays);
  std::normal_distribution<double> noise(0.0, cfg.noise_std);
  for (int i = 0; i < cfg.n_rays; ++i) {
    const Vec2 dir = compass_direction(pose.heading + ray_offset(cfg, i));
    double best = cfg.max_range;
    auto consider = [&best](std::optional<double> t) {
      if (t && *t < best) best = *t;
    };
    for (const Segment& s : scene.wall_segments) consider(ray_segment(origin, dir, s));
    for (const Polygon& p : scene.static_obstacles) consider(ray_polygon(origin, dir, p));
    for (const Disc& d : traffic) consider(ray_disc(origin, dir, d));
    if (cfg.noise_std > 0.0) {
      if (rng == nullptr) throw UsageError("sensor: noise_std > 0 requires an rng");
      best += noise(*rng);
    }
    out.ranges[i] = std::clamp(best, kMinRange, cfg.max_range);
  }
  return out;
}

}  // namespace portnav
