#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "portnav/sweep.hpp"
#include "portnav/world.hpp"

namespace portnav {

/// Line plot of mean return against the swept value with a shaded band of
/// one standard deviation and a vertical marker at the nominal value. The
/// turn-rate axis is logarithmic.
std::string sweep_svg(const SweepCurve& curve);

/// Top-down view of a scene: basin, quays, obstacles, traffic routes, goal
/// and an optional ego trace.
std::string scene_svg(const WorldScene& scene, const std::vector<VesselState>& trace = {});

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace portnav
