#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "portnav/env.hpp"
#include "portnav/errors.hpp"

using namespace portnav;

namespace {

void check_observation(const Observation& o, const EnvConfig& cfg) {
  REQUIRE(o.to_vector().size() == Observation::size(cfg.sensor.n_rays));
  for (double r : o.normalized_ranges) {
    REQUIRE(r > 0.0);
    REQUIRE(r <= 1.0);
  }
  REQUIRE(o.goal_distance >= 0.0);
  REQUIRE(o.goal_distance <= 1.0 + 1e-12);
  REQUIRE(o.goal_bearing >= -180.0);
  REQUIRE(o.goal_bearing < 180.0);
  REQUIRE(std::abs(o.speed) <= 1.0);
  REQUIRE(std::abs(o.angular_rate) <= 1.0);
  for (double v : o.to_vector()) REQUIRE(std::isfinite(v));
}

}  // namespace

TEST_SUITE("env") {

TEST_CASE("reset is deterministic per seed and starts at rest") {
  Env a{EnvConfig{}};
  Env b{EnvConfig{}};
  const Observation oa = a.reset(12);
  CHECK(oa.to_vector() == b.reset(12).to_vector());
  CHECK(oa.speed == 0.0);
  CHECK(oa.angular_rate == 0.0);
  CHECK(a.state().x == a.scene().spawn_pose.x);
  CHECK(a.steps() == 0);
  CHECK_FALSE(a.done());
  check_observation(oa, a.config());
}

TEST_CASE("without obstacles the ranges only see walls") {
  EnvConfig cfg;
  cfg.world.quay_count = {0, 0};
  cfg.world.static_count = {0, 0};
  cfg.world.dynamic_count = {0, 0};
  Env env(cfg);
  const Observation o = env.reset(3);
  const VesselState& p = env.state();
  for (int i = 0; i < cfg.sensor.n_rays; ++i) {
    const double want = oracle::ray_range(fixture::open_water(cfg.world.width, cfg.world.height), {p.x, p.y},
                                          oracle::ray_angle(cfg.sensor, p.heading, i), cfg.sensor.max_range);
    CHECK(o.normalized_ranges[static_cast<std::size_t>(i)] * cfg.sensor.max_range == doctest::Approx(want));
  }
}

TEST_CASE("observation vector layout") {
  Observation o;
  o.normalized_ranges = {0.5, 1.0};
  o.goal_distance = 0.25;
  o.goal_bearing = -90.0;
  o.speed = 0.125;
  o.angular_rate = -1.0;
  CHECK(o.to_vector() == std::vector<double>{0.5, 1.0, 0.25, -0.5, 0.125, -1.0});
  CHECK(Observation::size(32) == 36);
}

TEST_CASE("goal contact pays the goal reward and terminates") {
  WorldScene s = fixture::open_water(200, 200);
  s.spawn_pose = {100, 100, 0, 0, 0};
  s.goal = {{100, 100.5}, 0.3};
  Env env{EnvConfig{}};
  env.reset(s);
  const StepResult r = env.step({400000.0, 0});
  CHECK(r.info.goal);
  CHECK_FALSE(r.info.collision);
  CHECK(r.reward == 100.0);
  CHECK(r.terminated);
  CHECK_FALSE(r.truncated);
  CHECK(env.done());
  CHECK_THROWS_AS(env.step({0, 0}), UsageError);
}

TEST_CASE("wall contact pays the collision reward") {
  WorldScene s = fixture::open_water(200, 200);
  s.spawn_pose = {100, 195.5, 0, 0, 0};
  Env env{EnvConfig{}};
  env.reset(s);
  const StepResult r = env.step({400000.0, 0});
  CHECK(r.info.collision);
  CHECK(r.reward == -100.0);
  CHECK(r.terminated);
}

TEST_CASE("collision wins when goal and collision coincide") {
  WorldScene s = fixture::open_water(200, 200);
  s.spawn_pose = {100, 195.5, 0, 0, 0};
  s.goal = {{100, 196}, 2};
  Env env{EnvConfig{}};
  env.reset(s);
  const StepResult r = env.step({400000.0, 0});
  CHECK(r.info.collision);
  CHECK_FALSE(r.info.goal);
  CHECK(r.reward == -100.0);
}

TEST_CASE("a stationary vessel pays exactly the step cost") {
  Env env{EnvConfig{}};
  env.reset(fixture::open_water(200, 200));
  const StepResult r = env.step({0, 0});
  CHECK(r.reward == -0.05);
  CHECK_FALSE(r.terminated);
}

TEST_CASE("progress shaping follows the distance closed") {
  WorldScene s = fixture::open_water(200, 200);
  s.spawn_pose = {100, 20, 0, 0, 0};
  s.goal = {{100, 180}, 5};
  Env env{EnvConfig{}};
  env.reset(s);
  const double before = 160.0;
  const StepResult r = env.step({400000.0, 0});
  const double closed = before - r.info.distance_to_goal;
  CHECK(closed > 0.0);
  CHECK(r.reward == doctest::Approx(-0.05 + 0.5 * closed).epsilon(1e-14));
}

TEST_CASE("the horizon truncates") {
  EnvConfig cfg;
  cfg.horizon = 5;
  Env env(cfg);
  env.reset(fixture::open_water(200, 200));
  for (int t = 1; t <= 5; ++t) {
    const StepResult r = env.step({0, 0});
    CHECK(r.truncated == (t == 5));
    CHECK_FALSE(r.terminated);
  }
  CHECK(env.done());
}

TEST_CASE("stepping before reset is a usage error") {
  Env env{EnvConfig{}};
  CHECK_THROWS_AS(env.step({0, 0}), UsageError);
}

TEST_CASE("discounted return") {
  CHECK(discounted_return(std::vector<double>{1, 1, 1}, 1.0) == 3.0);
  CHECK(discounted_return(std::vector<double>{0, 0, 100}, 0.99) == doctest::Approx(98.01).epsilon(1e-15));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> r(50);
    for (double& v : r) v = u(rng);
    CHECK(std::abs(discounted_return(r, 0.97) - oracle::discounted(r, 0.97)) <= 1e-12 * 50 * 100);
  }
}

TEST_CASE("vessel parameters change between steps") {
  WorldScene s = fixture::open_water(400, 400);
  s.spawn_pose = {200, 50, 0, 0, 0};
  Env env{EnvConfig{}};
  env.reset(s);
  env.step({175000.0, 0});
  const double v1 = env.state().speed;
  VesselParams heavy = env.vessel_params();
  heavy.mass *= 2.0;
  env.set_vessel_params(heavy);
  env.step({175000.0, 0});
  CHECK(env.state().speed - v1 == doctest::Approx(0.25));

  VesselParams bad = heavy;
  bad.turn_rate = -1.0;
  CHECK_THROWS_AS(env.set_vessel_params(bad), InvalidConfig);
  CHECK(env.vessel_params() == heavy);
  const double v2 = env.state().speed;
  env.step({175000.0, 0});
  CHECK(env.state().speed - v2 == doctest::Approx(0.25));
}

TEST_CASE("episodes are reproducible from seed, actions and parameter schedule") {
  auto run = [](bool touch_params) {
    Env env{EnvConfig{}};
    env.reset(31);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<VesselState> trace;
    std::vector<double> rewards;
    while (!env.done()) {
      if (touch_params && env.steps() == 10) env.set_vessel_params(env.vessel_params());
      const StepResult r = env.step({400000.0 * u(rng), u(rng)});
      trace.push_back(env.state());
      rewards.push_back(r.reward);
    }
    return std::make_pair(trace, rewards);
  };
  const auto a = run(false);
  CHECK(a == run(false));
  CHECK(a == run(true));
}

TEST_CASE("random episodes keep observations valid, flags sound and returns bounded") {
  const EnvConfig cfg;
  Env env(cfg);
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-1, 1);
  int terminated = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    check_observation(env.reset(seed), cfg);
    const double d = env.scene().diagonal();
    double ret = 0.0;
    StepResult last;
    while (!env.done()) {
      last = env.step({cfg.vessel.thrust_max * u(rng), u(rng)});
      check_observation(last.observation, cfg);
      REQUIRE_FALSE((last.terminated && last.truncated));
      ret += last.reward;
    }
    if (last.terminated) {
      ++terminated;
      REQUIRE(last.info.goal != last.info.collision);
    }
    REQUIRE(ret >= cfg.reward.collision - cfg.horizon * std::abs(cfg.reward.step) - cfg.reward.progress * d);
    REQUIRE(ret <= cfg.reward.goal + cfg.reward.progress * d);
  }
  CHECK(terminated > 0);
}

TEST_CASE("env config validation") {
  EnvConfig cfg;
  cfg.gamma = 1.0;
  CHECK_THROWS_AS(Env{cfg}, InvalidConfig);
  cfg = {};
  cfg.horizon = 0;
  CHECK_THROWS_AS(Env{cfg}, InvalidConfig);
  cfg = {};
  cfg.vessel.mass = -5;
  CHECK_THROWS_AS(Env{cfg}, InvalidConfig);
}

}
