#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "portnav/errors.hpp"
#include "portnav/sensor.hpp"

using namespace portnav;

TEST_SUITE("sensor") {

TEST_CASE("no geometry in range gives max_range everywhere") {
  const WorldScene s = fixture::open_water(1000, 1000);
  const RangeScan r = scan(s, {500, 500, 17, 0, 0}, SensorConfig{});
  REQUIRE(r.ranges.size() == 32);
  for (double v : r.ranges) CHECK(v == 200.0);
}

TEST_CASE("a wall across a ray reports its distance") {
  WorldScene s = fixture::open_water(1000, 1000);
  s.wall_segments.push_back({{400, 537.5}, {600, 537.5}});
  SensorConfig cfg;
  cfg.n_rays = 1;
  CHECK(scan(s, {500, 500, 0, 0, 0}, cfg).ranges[0] == 37.5);
  // A full fan: ray n/2 looks straight ahead.
  cfg.n_rays = 32;
  CHECK(scan(s, {500, 500, 0, 0, 0}, cfg).ranges[16] == 37.5);
}

TEST_CASE("ray layout") {
  SensorConfig cfg;
  cfg.n_rays = 8;
  CHECK(ray_offset(cfg, 0) == -180.0);
  CHECK(ray_offset(cfg, 4) == 0.0);
  CHECK(ray_offset(cfg, 7) == 135.0);
  cfg.fov = 90.0;
  cfg.n_rays = 5;
  CHECK(ray_offset(cfg, 0) == -45.0);
  CHECK(ray_offset(cfg, 2) == 0.0);
  CHECK(ray_offset(cfg, 4) == 45.0);
  cfg.n_rays = 1;
  CHECK(ray_offset(cfg, 0) == 0.0);
}

TEST_CASE("scan equals brute-force nearest intersection") {
  std::mt19937_64 rng(2024);
  for (SensorConfig cfg : {SensorConfig{}, SensorConfig{17, 120.0, 90.0, 0.0}}) {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      WorldScene s = generate(seed, GenConfig{});
      advance_dynamics(s, 3.0 + static_cast<double>(seed));
      const VesselState pose = fixture::clear_pose(s, rng, 4.0);
      const RangeScan got = scan(s, pose, cfg);
      const std::vector<double> want = oracle::scan(s, pose, cfg);
      for (int i = 0; i < cfg.n_rays; ++i) {
        INFO("seed " << seed << " ray " << i);
        REQUIRE(std::abs(got.ranges[static_cast<std::size_t>(i)] - want[static_cast<std::size_t>(i)]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("quarter-turn rotation of scene and pose leaves the scan bit-identical") {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const WorldScene s = fixture::snap_dyadic(generate(seed, GenConfig{}));
    VesselState pose = fixture::clear_pose(s, rng, 4.0);
    pose.x = std::round(pose.x * 64) / 64;
    pose.y = std::round(pose.y * 64) / 64;
    pose.heading = std::round(pose.heading * 8) / 8;
    const RangeScan base = scan(s, pose, SensorConfig{});
    for (double turn : {90.0, 180.0, 270.0}) {
      const WorldScene r = fixture::rotate(s, {pose.x, pose.y}, turn);
      VesselState rp = pose;
      rp.heading = normalize_heading(pose.heading + turn);
      INFO("seed " << seed << " turn " << turn);
      REQUIRE(scan(r, rp, SensorConfig{}).ranges == base.ranges);
    }
  }
}

TEST_CASE("arbitrary rotations agree to rounding") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 360.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const WorldScene s = generate(seed, GenConfig{});
    const VesselState pose = fixture::clear_pose(s, rng, 4.0);
    const RangeScan base = scan(s, pose, SensorConfig{});
    const double phi = angle(rng);
    VesselState rp = pose;
    rp.heading = normalize_heading(pose.heading + phi);
    const RangeScan rotated = scan(fixture::rotate(s, {pose.x, pose.y}, phi), rp, SensorConfig{});
    for (std::size_t i = 0; i < base.ranges.size(); ++i) {
      INFO("seed " << seed << " ray " << i);
      REQUIRE(std::abs(rotated.ranges[i] - base.ranges[i]) <= 1e-9);
    }
  }
}

TEST_CASE("adding an obstacle never lengthens a ray") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    WorldScene s = generate(seed, GenConfig{});
    const VesselState pose = fixture::clear_pose(s, rng, 4.0);
    const RangeScan before = scan(s, pose, SensorConfig{});
    DynamicObstacle extra;
    extra.footprint_radius = 3 + 10 * u(rng);
    extra.route = {{s.bounds.max.x * u(rng), s.bounds.max.y * u(rng)}, {s.bounds.max.x * u(rng), 1.0}};
    s.dynamic_obstacles.push_back(extra);
    Polygon tri{{{pose.x + 30 * u(rng), pose.y + 20}, {pose.x + 40, pose.y + 35 * u(rng)}, {pose.x + 25, pose.y - 5}}};
    s.static_obstacles.push_back(tri);
    const RangeScan after = scan(s, pose, SensorConfig{});
    for (std::size_t i = 0; i < before.ranges.size(); ++i) REQUIRE(after.ranges[i] <= before.ranges[i]);
  }
}

TEST_CASE("noise needs a generator and stays within range bounds") {
  const WorldScene s = fixture::open_water(300, 300);
  SensorConfig cfg;
  cfg.noise_std = 500.0;
  CHECK_THROWS_AS(scan(s, {150, 150, 0, 0, 0}, cfg), UsageError);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    for (double v : scan(s, {150, 150, 0, 0, 0}, cfg, &rng).ranges) {
      REQUIRE(v > 0.0);
      REQUIRE(v <= cfg.max_range);
    }
  }
  std::mt19937_64 a(5), b(5);
  CHECK(scan(s, {150, 150, 0, 0, 0}, cfg, &a).ranges == scan(s, {150, 150, 0, 0, 0}, cfg, &b).ranges);
}

TEST_CASE("sensor config validation") {
  CHECK_THROWS_AS(validate(SensorConfig{0, 360, 200, 0}), InvalidConfig);
  CHECK_THROWS_AS(validate(SensorConfig{8, 0, 200, 0}), InvalidConfig);
  CHECK_THROWS_AS(validate(SensorConfig{8, 361, 200, 0}), InvalidConfig);
  CHECK_THROWS_AS(validate(SensorConfig{8, 360, -1, 0}), InvalidConfig);
  CHECK_THROWS_AS(validate(SensorConfig{8, 360, 200, -0.1}), InvalidConfig);
}

}
