#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "portnav/errors.hpp"
#include "portnav/kinematics.hpp"

using namespace portnav;

TEST_SUITE("kinematics") {

TEST_CASE("coasting at heading 0 moves along +y") {
  const VesselState s = step({0, 0, 0, 1, 0}, {0, 0}, VesselParams{});
  CHECK(s == VesselState{0, 0.5, 0, 1, 0});
}

TEST_CASE("thrust equal to the mass gives unit acceleration") {
  VesselParams p;
  p.mass = 175000.0;
  const VesselState s = step({0, 0, 0, 0, 0}, {175000.0, 0}, p);
  CHECK(s.speed == 0.5);
  // The new speed already moves the vessel within the same tick.
  CHECK(s.y == 0.25);
}

TEST_CASE("rudder on an eastbound vessel") {
  VesselParams p;
  p.turn_rate = 70.0;
  const VesselState s = step({0, 0, 90, 2, 0}, {0, 0.1}, p);
  CHECK(s.angular_rate == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(s.heading == doctest::Approx(91.75).epsilon(1e-15));
  // Displacement uses the heading before the tick: due east.
  CHECK(s.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(s.y) < 1e-15);
}

TEST_CASE("step agrees with the reference integrator on random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    VesselParams p;
    p.mass = 1e4 + 1e6 * std::abs(u(rng));
    p.turn_rate = 1.0 + 700.0 * std::abs(u(rng));
    p.dt = 0.05 + std::abs(u(rng));
    const VesselState s{500 * u(rng), 500 * u(rng), 180 + 180 * u(rng) * 0.999, p.speed_max * u(rng),
                        p.angular_rate_max * u(rng)};
    const ControlInput in{p.thrust_max * u(rng), u(rng)};
    const VesselState got = step(s, in, p);
    const VesselState want = oracle::vessel_step(s, in, p);
    REQUIRE(std::abs(got.x - want.x) <= 1e-9);
    REQUIRE(std::abs(got.y - want.y) <= 1e-9);
    REQUIRE(oracle::angle_gap(got.heading, want.heading) <= 1e-9);
    REQUIRE(std::abs(got.speed - want.speed) <= 1e-9);
    REQUIRE(std::abs(got.angular_rate - want.angular_rate) <= 1e-9);
  }
}

TEST_CASE("heading stays in range and velocities stay clamped") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  VesselParams p;
  VesselState s;
  for (int i = 0; i < 100000; ++i) {
    s = step(s, clamp({p.thrust_max * u(rng), u(rng)}, p), p);
    REQUIRE(s.heading >= 0.0);
    REQUIRE(s.heading < 360.0);
    REQUIRE(std::abs(s.speed) <= p.speed_max);
    REQUIRE(std::abs(s.angular_rate) <= p.angular_rate_max);
  }
}

TEST_CASE("identical inputs give bit-identical successors") {
  const VesselState s{1.25, -3.5, 359.9, 3.3, -7.1};
  const ControlInput in{123456.0, -0.3};
  CHECK(step(s, in, {}) == step(s, in, {}));
}

TEST_CASE("zero control leaves speed and angular rate untouched") {
  VesselState s{0, 0, 33.0, 5.5, -2.25};
  for (int i = 0; i < 1000; ++i) {
    s = step(s, {0, 0}, {});
    REQUIRE(s.speed == 5.5);
    REQUIRE(s.angular_rate == -2.25);
  }
}

TEST_CASE("non-finite inputs are rejected") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(step({}, {nan, 0}, {}), InvalidState);
  CHECK_THROWS_AS(step({}, {0, inf}, {}), InvalidState);
  CHECK_THROWS_AS(step({nan, 0, 0, 0, 0}, {0, 0}, {}), InvalidState);
  CHECK_THROWS_AS(clamp({nan, 0}, {}), InvalidState);
}

TEST_CASE("clamp clips and is idempotent") {
  const VesselParams p;
  CHECK(clamp({2 * p.thrust_max, 0}, p) == ControlInput{p.thrust_max, 0});
  CHECK(clamp({0, -3}, p) == ControlInput{0, -1});
  const ControlInput ok{-1000.0, 0.25};
  CHECK(clamp(ok, p) == ok);
  const ControlInput once = clamp({-9e9, 7}, p);
  CHECK(clamp(once, p) == once);
}

TEST_CASE("set_params applies between steps and rejects invalid values") {
  Kinematics k;
  const ControlInput push{175000.0, 0};
  CHECK(k.step({}, push).speed == 0.5);
  VesselParams heavy = k.params();
  heavy.mass = 350000.0;
  k.set_params(heavy);
  CHECK(k.step({}, push).speed == 0.25);

  k.set_params(heavy);
  CHECK(k.params() == heavy);

  VesselParams bad = heavy;
  bad.mass = 0.0;
  CHECK_THROWS_AS(k.set_params(bad), InvalidConfig);
  CHECK(k.params() == heavy);
  bad = heavy;
  bad.dt = -1.0;
  CHECK_THROWS_AS(k.set_params(bad), InvalidConfig);
  CHECK(k.params() == heavy);
}

TEST_CASE("angle helpers") {
  CHECK(normalize_heading(-90.0) == 270.0);
  CHECK(normalize_heading(720.0) == 0.0);
  CHECK(normalize_heading(-1e-17) == 0.0);
  CHECK(wrap_bearing(190.0) == -170.0);
  CHECK(wrap_bearing(180.0) == -180.0);
  CHECK(wrap_bearing(-180.0) == -180.0);
  CHECK(wrap_bearing(45.0) == 45.0);
}

}
