#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "portnav/config.hpp"
#include "portnav/world.hpp"

namespace fixture {

using namespace portnav;

/// Walled basin with nothing in it.
WorldScene open_water(double width, double height);

/// A uniformly drawn pose whose footprint disc is clear of all geometry.
VesselState clear_pose(const WorldScene& scene, std::mt19937_64& rng, double radius);

/// Rotates the whole scene clockwise by `degrees` about `center` (compass
/// convention, so headings grow by `degrees`). A multiple of 90 is applied as
/// an exact coordinate swap.
WorldScene rotate(const WorldScene& scene, Vec2 center, double degrees);

/// Snaps every coordinate to a multiple of 1/64 so exact rotations stay exact.
WorldScene snap_dyadic(const WorldScene& scene);

/// Open water, goal 15 m straight ahead. Small networks for fast tests.
RunConfig near_goal_config();

/// Tiny learner settings used by trainer tests.
RunConfig tiny_run(std::uint64_t steps, int workers, std::uint64_t seed, const std::filesystem::path& out);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& name);

std::string read_file(const std::filesystem::path& p);

/// True when two checkpoints hold the same learner: weights, optimizer
/// state, rng, step count and config hash. The embedded config text is not
/// compared because it records the output directory.
bool same_learner_state(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace fixture
