#include "portnav/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "portnav/errors.hpp"

namespace portnav {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

bool finite(const VesselState& s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.heading) &&
         std::isfinite(s.speed) && std::isfinite(s.angular_rate);
}

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw InvalidConfig(std::string("vessel parameter '") + name + "' must be finite and > 0, got " +
                        std::to_string(v));
  }
}

}  // namespace

void validate(const VesselParams& p) {
  require_positive(p.mass, "mass");
  require_positive(p.turn_rate, "turn_rate");
  require_positive(p.thrust_max, "thrust_max");
  require_positive(p.speed_max, "speed_max");
  require_positive(p.angular_rate_max, "angular_rate_max");
  require_positive(p.dt, "dt");
}

double normalize_heading(double degrees) {
  double h = std::fmod(degrees, 360.0);
  if (h < 0.0) h += 360.0;
  // -1e-17 + 360 rounds to 360.
  if (h >= 360.0) h = 0.0;
  return h;
}

double wrap_bearing(double degrees) {
  double b = std::fmod(degrees + 180.0, 360.0);
  if (b < 0.0) b += 360.0;
  b -= 180.0;
  if (b >= 180.0) b -= 360.0;
  return b;
}

ControlInput clamp(const ControlInput& input, const VesselParams& params) {
  if (!std::isfinite(input.thrust) || !std::isfinite(input.rudder)) {
    throw InvalidState("control input must be finite");
  }
  return {std::clamp(input.thrust, -params.thrust_max, params.thrust_max),
          std::clamp(input.rudder, -1.0, 1.0)};
}

VesselState step(const VesselState& state, const ControlInput& input, const VesselParams& params) {
  if (!finite(state)) throw InvalidState("vessel state must be finite");
  if (!std::isfinite(input.thrust) || !std::isfinite(input.rudder)) {
    throw InvalidState("control input must be finite");
  }
  const double dt = params.dt;
  const double accel = input.thrust / params.mass;

  VesselState next;
  next.speed = std::clamp(state.speed + accel * dt, -params.speed_max, params.speed_max);
  next.angular_rate = std::clamp(state.angular_rate + input.rudder * params.turn_rate * dt,
                                 -params.angular_rate_max, params.angular_rate_max);

  const double h = state.heading * kDegToRad;
  next.x = state.x + std::sin(h) * (next.speed * dt);
  next.y = state.y + std::cos(h) * (next.speed * dt);
  next.heading = normalize_heading(state.heading + next.angular_rate * dt);

  if (!finite(next)) throw InvalidState("vessel step produced a non-finite state");
  return next;
}

Kinematics::Kinematics(const VesselParams& params) : params_(params) { validate(params_); }

void Kinematics::set_params(const VesselParams& params) {
  validate(params);
  params_ = params;
}

VesselState Kinematics::step(const VesselState& state, const ControlInput& input) const {
  return portnav::step(state, input, params_);
}

}  // namespace portnav
