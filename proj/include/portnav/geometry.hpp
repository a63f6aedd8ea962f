#pragma once

#include <optional>
#include <span>
#include <vector>

namespace portnav {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 v);

struct Segment {
  Vec2 a;
  Vec2 b;
  bool operator==(const Segment&) const = default;
};

struct Rect {
  Vec2 min;
  Vec2 max;
  bool operator==(const Rect&) const = default;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  bool contains(Vec2 p) const { return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y; }
};

struct Disc {
  Vec2 center;
  double radius = 0.0;
  bool operator==(const Disc&) const = default;
};

/// Closed polygon given by its vertex loop; the closing edge is implicit.
struct Polygon {
  std::vector<Vec2> vertices;
  bool operator==(const Polygon&) const = default;

  std::size_t edge_count() const { return vertices.size(); }
  Segment edge(std::size_t i) const { return {vertices[i], vertices[(i + 1) % vertices.size()]}; }
};

/// Unit vector for a compass heading (0 deg = +y, clockwise positive).
/// Quadrants are reduced exactly, so heading + 90 yields the exact 90 degree
/// rotation of the heading's direction whenever that sum is representable.
Vec2 compass_direction(double heading_deg);

double point_segment_distance(Vec2 p, const Segment& s);

/// Even-odd containment test; boundary points may go either way.
bool point_in_polygon(Vec2 p, const Polygon& poly);

double point_polygon_distance(Vec2 p, const Polygon& poly);

bool segments_intersect(const Segment& s, const Segment& t);

/// No two non-adjacent edges touch and no adjacent edges fold back.
bool is_simple(const Polygon& poly);

bool is_convex(const Polygon& poly);

/// Distance along a unit-direction ray to the first hit, if any. Parallel
/// segments are treated as misses.
std::optional<double> ray_segment(Vec2 origin, Vec2 dir, const Segment& s);
std::optional<double> ray_disc(Vec2 origin, Vec2 dir, const Disc& d);
std::optional<double> ray_polygon(Vec2 origin, Vec2 dir, const Polygon& poly);

/// Rectangle outline as four segments, counter-clockwise from min.
std::vector<Segment> rect_edges(const Rect& r);

/// Point at arc length `s` along an open polyline (clamped to its ends).
Vec2 point_along(std::span<const Vec2> polyline, double s);
double polyline_length(std::span<const Vec2> polyline);

}  // namespace portnav
