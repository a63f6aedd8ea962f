#pragma once

#include <random>
#include <vector>

#include "portnav/kinematics.hpp"
#include "portnav/world.hpp"

namespace portnav {

struct SensorConfig {
  int n_rays = 32;
  double fov = 360.0;        // deg, centred on the heading
  double max_range = 200.0;  // m
  double noise_std = 0.0;    // m
};

void validate(const SensorConfig& cfg);

struct RangeScan {
  std::vector<double> ranges;  // m, each in (0, max_range]
};

/// Compass angle of ray `i` relative to the heading. A partial fan spans
/// [-fov/2, +fov/2] inclusive; a full 360 degree fan is spaced fov/n_rays so
/// the first and last rays do not coincide. Ray n_rays/2 of a full fan looks
/// straight ahead.
double ray_offset(const SensorConfig& cfg, int i);

/// Casts every ray against walls, static polygons and traffic discs. Rays that
/// hit nothing report exactly max_range. `rng` is only drawn from when
/// noise_std > 0.
RangeScan scan(const WorldScene& scene, const VesselState& pose, const SensorConfig& cfg,
               std::mt19937_64* rng = nullptr);

}  // namespace portnav
