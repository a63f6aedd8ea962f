#pragma once

// 3-DOF planar vessel model. Headings use the compass convention: 0 deg points
// along +y and angles grow clockwise, so the ego advances by (sin h, cos h).

namespace portnav {

struct VesselState {
  double x = 0.0;             // m
  double y = 0.0;             // m
  double heading = 0.0;       // deg, [0, 360)
  double speed = 0.0;         // m/s
  double angular_rate = 0.0;  // deg/s

  bool operator==(const VesselState&) const = default;
};

struct ControlInput {
  double thrust = 0.0;  // N
  double rudder = 0.0;  // [-1, 1]

  bool operator==(const ControlInput&) const = default;
};

struct VesselParams {
  double mass = 175000.0;           // kg
  double turn_rate = 70.0;          // deg/s^2 per unit rudder
  double thrust_max = 400000.0;     // N
  double speed_max = 8.0;           // m/s
  double angular_rate_max = 15.0;   // deg/s
  double dt = 0.5;                  // s

  bool operator==(const VesselParams&) const = default;
};

inline constexpr double kNominalMass = 175000.0;
inline constexpr double kNominalTurnRate = 70.0;

/// Throws InvalidConfig unless every field is finite and strictly positive.
void validate(const VesselParams& params);

/// Clips thrust to [-thrust_max, thrust_max] and rudder to [-1, 1].
/// Throws InvalidState on non-finite input.
ControlInput clamp(const ControlInput& input, const VesselParams& params);

/// One semi-implicit Euler tick:
///   a = thrust / mass
///   speed += a dt, angular_rate += rudder turn_rate dt   (then clamped)
///   x += sin(h) speed dt, y += cos(h) speed dt, h += angular_rate dt
/// where h is the heading before the tick and the velocities are the updated
/// ones. Throws InvalidState if any input is non-finite.
VesselState step(const VesselState& state, const ControlInput& input, const VesselParams& params);

/// Wraps any finite angle into [0, 360).
double normalize_heading(double degrees);

/// Wraps any finite angle into [-180, 180).
double wrap_bearing(double degrees);

/// Holds the vessel parameters used by successive steps. Parameter changes are
/// whole-value swaps between ticks; an invalid update leaves the old values.
class Kinematics {
 public:
  explicit Kinematics(const VesselParams& params = {});

  const VesselParams& params() const noexcept { return params_; }
  void set_params(const VesselParams& params);

  VesselState step(const VesselState& state, const ControlInput& input) const;

 private:
  VesselParams params_;
};

}  // namespace portnav
