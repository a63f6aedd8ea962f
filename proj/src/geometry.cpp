#include "portnav/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace portnav {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

Vec2 compass_direction(double heading_deg) {
  double r = std::fmod(heading_deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;
  int quadrant = static_cast<int>(std::floor(r / 90.0));
  double rem = r - 90.0 * quadrant;
  if (rem < 0.0) {
    --quadrant;
    rem += 90.0;
  }
  quadrant = ((quadrant % 4) + 4) % 4;
  const double rad = rem * (std::numbers::pi / 180.0);
  const double s = std::sin(rad);
  const double c = std::cos(rad);
  switch (quadrant) {
    case 0: return {s, c};
    case 1: return {c, -s};
    case 2: return {-s, -c};
    default: return {-c, s};
  }
}

double point_segment_distance(Vec2 p, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const double len2 = dot(e, e);
  if (len2 == 0.0) return norm(p - s.a);
  const double t = std::clamp(dot(p - s.a, e) / len2, 0.0, 1.0);
  return norm(p - (s.a + t * e));
}

bool point_in_polygon(Vec2 p, const Polygon& poly) {
  bool inside = false;
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x_cross = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

double point_polygon_distance(Vec2 p, const Polygon& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.edge_count(); ++i) {
    best = std::min(best, point_segment_distance(p, poly.edge(i)));
  }
  return best;
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(const Segment& s, const Segment& t) {
  const int o1 = orientation(s.a, s.b, t.a);
  const int o2 = orientation(s.a, s.b, t.b);
  const int o3 = orientation(t.a, t.b, s.a);
  const int o4 = orientation(t.a, t.b, s.b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(s.a, s.b, t.a)) return true;
  if (o2 == 0 && on_segment(s.a, s.b, t.b)) return true;
  if (o3 == 0 && on_segment(t.a, t.b, s.a)) return true;
  if (o4 == 0 && on_segment(t.a, t.b, s.b)) return true;
  return false;
}

bool is_simple(const Polygon& poly) {
  const std::size_t n = poly.edge_count();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Segment ei = poly.edge(i);
    if (ei.a == ei.b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const Segment ej = poly.edge(j);
      if (adjacent) {
        // Adjacent edges share exactly one vertex; collinear overlap folds the loop.
        const Vec2 shared = (j == i + 1) ? ei.b : ei.a;
        const Vec2 other_i = (j == i + 1) ? ei.a : ei.b;
        const Vec2 other_j = (j == i + 1) ? ej.b : ej.a;
        if (orientation(other_i, shared, other_j) == 0 &&
            dot(other_i - shared, other_j - shared) > 0.0) {
          return false;
        }
        continue;
      }
      if (segments_intersect(ei, ej)) return false;
    }
  }
  return true;
}

bool is_convex(const Polygon& poly) {
  const std::size_t n = poly.vertices.size();
  if (n < 3) return false;
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int o = orientation(poly.vertices[i], poly.vertices[(i + 1) % n], poly.vertices[(i + 2) % n]);
    if (o == 0) continue;
    if (sign == 0) sign = o;
    else if (o != sign) return false;
  }
  return sign != 0 && is_simple(poly);
}

std::optional<double> ray_segment(Vec2 origin, Vec2 dir, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const Vec2 p = s.a - origin;
  const double denom = cross(dir, e);
  if (denom == 0.0) return std::nullopt;
  const double t = cross(p, e) / denom;
  const double u = cross(p, dir) / denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return t;
}

std::optional<double> ray_disc(Vec2 origin, Vec2 dir, const Disc& d) {
  const Vec2 m = d.center - origin;
  const double b = dot(m, dir);
  const double c = dot(m, m) - d.radius * d.radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  double t = b - root;
  if (t < 0.0) t = b + root;
  if (t < 0.0) return std::nullopt;
  return t;
}

std::optional<double> ray_polygon(Vec2 origin, Vec2 dir, const Polygon& poly) {
  std::optional<double> best;
  for (std::size_t i = 0; i < poly.edge_count(); ++i) {
    if (auto t = ray_segment(origin, dir, poly.edge(i)); t && (!best || *t < *best)) best = t;
  }
  return best;
}

std::vector<Segment> rect_edges(const Rect& r) {
  const Vec2 a = r.min;
  const Vec2 b{r.max.x, r.min.y};
  const Vec2 c = r.max;
  const Vec2 d{r.min.x, r.max.y};
  return {{a, b}, {b, c}, {c, d}, {d, a}};
}

double polyline_length(std::span<const Vec2> polyline) {
  double len = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) len += norm(polyline[i] - polyline[i - 1]);
  return len;
}

Vec2 point_along(std::span<const Vec2> polyline, double s) {
  if (polyline.empty()) return {};
  if (s <= 0.0) return polyline.front();
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    const Vec2 e = polyline[i] - polyline[i - 1];
    const double len = norm(e);
    if (s <= len) {
      if (len == 0.0) return polyline[i - 1];
      return polyline[i - 1] + (s / len) * e;
    }
    s -= len;
  }
  return polyline.back();
}

}  // namespace portnav
