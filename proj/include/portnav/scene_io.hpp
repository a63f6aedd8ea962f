#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "portnav/world.hpp"

namespace portnav {

inline constexpr int kSceneSchemaVersion = 1;

// Scene files are JSON objects:
//   {"schema": "portnav-scene", "schema_version": 1,
//    "bounds": {"min": [x, y], "max": [x, y]},
//    "wall_segments": [[[x, y], [x, y]], ...],
//    "quays": [{"min": [..], "max": [..]}, ...],
//    "static_obstacles": [[[x, y], ...], ...],
//    "dynamic_obstacles": [{"footprint_radius": r, "speed": v,
//                           "route_progress": s, "route": [[x, y], ...]}, ...],
//    "goal": {"center": [x, y], "radius": r},
//    "spawn_pose": {"x":, "y":, "heading":, "speed":, "angular_rate":}}
// Doubles are written with round-trip precision, so load(save(s)) == s.

nlohmann::json to_json(const WorldScene& scene);
WorldScene scene_from_json(const nlohmann::json& j);

nlohmann::json to_json(const VesselState& s);
VesselState state_from_json(const nlohmann::json& j);

void save_scene(const WorldScene& scene, const std::filesystem::path& path);
WorldScene load_scene(const std::filesystem::path& path);

}  // namespace portnav
