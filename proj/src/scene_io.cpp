#include "portnav/scene_io.hpp"

#include <fstream>
#include <stdexcept>

#include "portnav/errors.hpp"

namespace portnav {

using nlohmann::json;

namespace {

json pt(Vec2 v) { return json::array({v.x, v.y}); }
Vec2 pt(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json rect(const Rect& r) { return {{"min", pt(r.min)}, {"max", pt(r.max)}}; }
Rect rect(const json& j) { return {pt(j.at("min")), pt(j.at("max"))}; }

}  // namespace

json to_json(const VesselState& s) {
  return {{"x", s.x}, {"y", s.y}, {"heading", s.heading}, {"speed", s.speed}, {"angular_rate", s.angular_rate}};
}

VesselState state_from_json(const json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("heading").get<double>(),
          j.at("speed").get<double>(), j.at("angular_rate").get<double>()};
}

json to_json(const WorldScene& scene) {
  json j;
  j["schema"] = "portnav-scene";
  j["schema_version"] = kSceneSchemaVersion;
  j["bounds"] = rect(scene.bounds);
  j["wall_segments"] = json::array();
  for (const Segment& s : scene.wall_segments) j["wall_segments"].push_back(json::array({pt(s.a), pt(s.b)}));
  j["quays"] = json::array();
  for (const Rect& q : scene.quays) j["quays"].push_back(rect(q));
  j["static_obstacles"] = json::array();
  for (const Polygon& p : scene.static_obstacles) {
    json verts = json::array();
    for (Vec2 v : p.vertices) verts.push_back(pt(v));
    j["static_obstacles"].push_back(std::move(verts));
  }
  j["dynamic_obstacles"] = json::array();
  for (const DynamicObstacle& o : scene.dynamic_obstacles) {
    json route = json::array();
    for (Vec2 v : o.route) route.push_back(pt(v));
    j["dynamic_obstacles"].push_back({{"footprint_radius", o.footprint_radius},
                                      {"speed", o.speed},
                                      {"route_progress", o.route_progress},
                                      {"route", std::move(route)}});
  }
  j["goal"] = {{"center", pt(scene.goal.center)}, {"radius", scene.goal.radius}};
  j["spawn_pose"] = to_json(scene.spawn_pose);
  return j;
}

WorldScene scene_from_json(const json& j) {
  if (!j.contains("schema_version")) throw InvalidConfig("scene: missing schema_version");
  if (j.at("schema_version").get<int>() != kSceneSchemaVersion) {
    throw InvalidConfig("scene: unsupported schema_version " + j.at("schema_version").dump());
  }
  WorldScene scene;
  scene.bounds = rect(j.at("bounds"));
  for (const json& s : j.at("wall_segments")) scene.wall_segments.push_back({pt(s.at(0)), pt(s.at(1))});
  for (const json& q : j.at("quays")) scene.quays.push_back(rect(q));
  for (const json& p : j.at("static_obstacles")) {
    Polygon poly;
    for (const json& v : p) poly.vertices.push_back(pt(v));
    scene.static_obstacles.push_back(std::move(poly));
  }
  for (const json& o : j.at("dynamic_obstacles")) {
    DynamicObstacle d;
    d.footprint_radius = o.at("footprint_radius").get<double>();
    d.speed = o.at("speed").get<double>();
    d.route_progress = o.at("route_progress").get<double>();
    for (const json& v : o.at("route")) d.route.push_back(pt(v));
    if (d.route.size() < 2) throw InvalidConfig("scene: dynamic obstacle route needs >= 2 waypoints");
    scene.dynamic_obstacles.push_back(std::move(d));
  }
  scene.goal = {pt(j.at("goal").at("center")), j.at("goal").at("radius").get<double>()};
  scene.spawn_pose = state_from_json(j.at("spawn_pose"));
  return scene;
}

void save_scene(const WorldScene& scene, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scene file " + path.string());
  out << to_json(scene).dump(1) << '\n';
}

WorldScene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scene file " + path.string());
  return scene_from_json(json::parse(in));
}

}  // namespace portnav
