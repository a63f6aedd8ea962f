#include "portnav/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "portnav/config.hpp"

namespace portnav {

namespace {

constexpr double kW = 640.0;
constexpr double kH = 420.0;
constexpr double kMargin = 60.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

std::string sweep_svg(const SweepCurve& curve) {
  const bool log_x = curve.param == SweepParam::TurnRate;
  std::vector<double> xs;
  double y_lo = 0.0;
  double y_hi = 0.0;
  bool first = true;
  for (const SweepPoint& p : curve.points) {
    xs.push_back(p.value);
    const double lo = p.mean_return - p.std_return;
    const double hi = p.mean_return + p.std_return;
    y_lo = first ? lo : std::min(y_lo, lo);
    y_hi = first ? hi : std::max(y_hi, hi);
    first = false;
  }
  if (curve.nominal > 0.0) xs.push_back(curve.nominal);
  double x_lo = xs.empty() ? 0.0 : *std::min_element(xs.begin(), xs.end());
  double x_hi = xs.empty() ? 1.0 : *std::max_element(xs.begin(), xs.end());
  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  double a = tx(x_lo);
  double b = tx(x_hi);
  if (b <= a) b = a + 1.0;
  if (y_hi <= y_lo) {
    y_hi += 1.0;
    y_lo -= 1.0;
  }
  auto px = [&](double v) { return kMargin + (tx(v) - a) / (b - a) * (kW - 2 * kMargin); };
  auto py = [&](double v) { return kH - kMargin - (v - y_lo) / (y_hi - y_lo) * (kH - 2 * kMargin); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\"" << kW - kMargin << "\" y2=\""
      << kH - kMargin << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\"" << kH - kMargin
      << "\" stroke=\"black\"/>\n";
  if (!curve.points.empty()) {
    svg << "<polygon fill=\"steelblue\" fill-opacity=\"0.25\" points=\"";
    for (const SweepPoint& p : curve.points) svg << num(px(p.value)) << ',' << num(py(p.mean_return + p.std_return)) << ' ';
    for (auto it = curve.points.rbegin(); it != curve.points.rend(); ++it) {
      svg << num(px(it->value)) << ',' << num(py(it->mean_return - it->std_return)) << ' ';
    }
    svg << "\"/>\n<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (const SweepPoint& p : curve.points) svg << num(px(p.value)) << ',' << num(py(p.mean_return)) << ' ';
    svg << "\"/>\n";
    for (const SweepPoint& p : curve.points) {
      svg << "<text x=\"" << num(px(p.value)) << "\" y=\"" << kH - kMargin + 16
          << "\" font-size=\"10\" text-anchor=\"middle\">" << label(p.value) << "</text>\n";
    }
  }
  if (curve.nominal > 0.0) {
    svg << "<line x1=\"" << num(px(curve.nominal)) << "\" y1=\"" << kMargin << "\" x2=\"" << num(px(curve.nominal))
        << "\" y2=\"" << kH - kMargin << "\" stroke=\"gray\" stroke-dasharray=\"4,3\"/>\n";
  }
  for (double v : {y_lo, 0.5 * (y_lo + y_hi), y_hi}) {
    svg << "<text x=\"" << kMargin - 6 << "\" y=\"" << num(py(v)) << "\" font-size=\"10\" text-anchor=\"end\">"
        << label(v) << "</text>\n";
  }
  svg << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 16 << "\" font-size=\"12\" text-anchor=\"middle\">"
      << to_string(curve.param) << (log_x ? " (log scale)" : "") << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kH / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 " << kH / 2
      << ")\" text-anchor=\"middle\">mean return</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string scene_svg(const WorldScene& scene, const std::vector<VesselState>& trace) {
  const double scale = 2.0;
  const double w = (scene.bounds.max.x - scene.bounds.min.x) * scale;
  const double h = (scene.bounds.max.y - scene.bounds.min.y) * scale;
  // World y grows upward, SVG y downward.
  auto X = [&](double x) { return num((x - scene.bounds.min.x) * scale); };
  auto Y = [&](double y) { return num((scene.bounds.max.y - y) * scale); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#dbe9f6\" stroke=\"black\"/>\n";
  for (const Rect& q : scene.quays) {
    svg << "<rect x=\"" << X(q.min.x) << "\" y=\"" << Y(q.max.y) << "\" width=\"" << num((q.max.x - q.min.x) * scale)
        << "\" height=\"" << num((q.max.y - q.min.y) * scale) << "\" fill=\"#9c8f7a\"/>\n";
  }
  for (const Polygon& poly : scene.static_obstacles) {
    svg << "<polygon fill=\"#555\" points=\"";
    for (const Vec2& v : poly.vertices) svg << X(v.x) << ',' << Y(v.y) << ' ';
    svg << "\"/>\n";
  }
  for (const DynamicObstacle& d : scene.dynamic_obstacles) {
    svg << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-dasharray=\"5,4\" points=\"";
    for (const Vec2& v : d.route) svg << X(v.x) << ',' << Y(v.y) << ' ';
    svg << "\"/>\n";
    const Vec2 p = d.position();
    svg << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"" << num(d.footprint_radius * scale)
        << "\" fill=\"#c0392b\"/>\n";
  }
  svg << "<circle cx=\"" << X(scene.goal.center.x) << "\" cy=\"" << Y(scene.goal.center.y) << "\" r=\""
      << num(scene.goal.radius * scale) << "\" fill=\"#27ae60\" fill-opacity=\"0.5\"/>\n";
  svg << "<circle cx=\"" << X(scene.spawn_pose.x) << "\" cy=\"" << Y(scene.spawn_pose.y)
      << "\" r=\"4\" fill=\"black\"/>\n";
  if (!trace.empty()) {
    svg << "<polyline fill=\"none\" stroke=\"#1f4e99\" stroke-width=\"2\" points=\"";
    for (const VesselState& s : trace) svg << X(s.x) << ',' << Y(s.y) << ' ';
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace portnav
