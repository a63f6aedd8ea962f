#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "portnav/agents.hpp"
#include "portnav/env.hpp"

namespace portnav {

enum class SweepParam { Mass, TurnRate };
const char* to_string(SweepParam p);
/// Throws UsageError for anything other than "mass" or "turn_rate".
SweepParam sweep_param_from_string(const std::string& s);

struct SweepSpec {
  SweepParam param = SweepParam::Mass;
  std::vector<double> grid;
  int episodes = 20;
  std::uint64_t seed = 1000000;
};

/// Throws UsageError when the grid is empty, a value is not finite and
/// positive, or episodes < 1.
void validate(const SweepSpec& spec);

struct SweepPoint {
  double value = 0.0;
  double mean_return = 0.0;
  double std_return = 0.0;
  double success_rate = 0.0;
  double collision_rate = 0.0;
  int n_episodes = 0;

  bool operator==(const SweepPoint&) const = default;
};

struct SweepCurve {
  SweepParam param = SweepParam::Mass;
  double nominal = 0.0;
  std::string config_hash;
  std::vector<SweepPoint> points;  // ascending by value

  bool operator==(const SweepCurve&) const = default;
};

/// n evenly spaced values from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, int n);
/// n values from lo to hi inclusive with a constant ratio between neighbours.
std::vector<double> log_grid(double lo, double hi, int n);

struct DefaultGrids {
  std::vector<double> mass;       // linear, 0.25x to 4x nominal
  std::vector<double> turn_rate;  // logarithmic, 0.1x to 10x nominal
};
DefaultGrids default_grids(double nominal_mass = kNominalMass, double nominal_turn_rate = kNominalTurnRate);

/// VesselParams used at a grid point: `base` with one field replaced.
VesselParams with_param(VesselParams base, SweepParam param, double value);

/// Evaluates `policy` deterministically at every grid value. Each episode
/// starts with the swept parameter set and the rest of env_cfg.vessel kept.
/// All points share the seed set spec.seed .. spec.seed + episodes - 1.
/// Points run on up to `threads` threads; the result does not depend on it.
SweepCurve run_sweep(const Policy& policy, const EnvConfig& env_cfg, const SweepSpec& spec,
                     const std::string& config_hash, int threads = 1);

// CSV layout:
//   # portnav-sweep v1 param=<name> nominal=<value> config_hash=<hex>
//   param,value,mean_return,std_return,success_rate,collision_rate,n_episodes
//   one row per point
void write_sweep_csv(const SweepCurve& curve, const std::filesystem::path& path);
std::string sweep_csv(const SweepCurve& curve);
SweepCurve read_sweep_csv(const std::filesystem::path& path);

}  // namespace portnav
