#include "portnav/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "portnav/config.hpp"
#include "portnav/errors.hpp"
#include "portnav/trainer.hpp"

namespace portnav {

const char* to_string(SweepParam p) { return p == SweepParam::Mass ? "mass" : "turn_rate"; }

SweepParam sweep_param_from_string(const std::string& s) {
  if (s == "mass") return SweepParam::Mass;
  if (s == "turn_rate") return SweepParam::TurnRate;
  throw UsageError("unknown sweep parameter '" + s + "' (expected mass or turn_rate)");
}

void validate(const SweepSpec& spec) {
  if (spec.grid.empty()) throw UsageError("sweep grid is empty");
  for (double v : spec.grid) {
    if (!std::isfinite(v) || v <= 0.0) throw UsageError("sweep grid values must be finite and > 0");
  }
  if (spec.episodes < 1) throw UsageError("sweep needs at least one episode per point");
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1) throw UsageError("grid needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(n));
  const double step = (hi - lo) / (n - 1);
  for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = lo + k * step;
  g.back() = hi;
  return g;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1) throw UsageError("grid needs at least one point");
  if (!(lo > 0.0) || !(hi > 0.0)) throw UsageError("log grid bounds must be > 0");
  if (n == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(n));
  const double ratio = hi / lo;
  for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = lo * std::pow(ratio, static_cast<double>(k) / (n - 1));
  g.back() = hi;
  return g;
}

DefaultGrids default_grids(double nominal_mass, double nominal_turn_rate) {
  return {linear_grid(0.25 * nominal_mass, 4.0 * nominal_mass, 11),
          log_grid(0.1 * nominal_turn_rate, 10.0 * nominal_turn_rate, 11)};
}

VesselParams with_param(VesselParams base, SweepParam param, double value) {
  (param == SweepParam::Mass ? base.mass : base.turn_rate) = value;
  return base;
}

SweepCurve run_sweep(const Policy& policy, const EnvConfig& env_cfg, const SweepSpec& spec,
                     const std::string& config_hash, int threads) {
  validate(spec);
  validate(env_cfg);
  std::vector<double> grid = spec.grid;
  std::sort(grid.begin(), grid.end());

  SweepCurve curve;
  curve.param = spec.param;
  curve.nominal = spec.param == SweepParam::Mass ? env_cfg.vessel.mass : env_cfg.vessel.turn_rate;
  curve.config_hash = config_hash;
  curve.points.resize(grid.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    std::unique_ptr<Policy> local = policy.clone();
    try {
      for (std::size_t i = next++; i < grid.size(); i = next++) {
        const VesselParams vessel = with_param(env_cfg.vessel, spec.param, grid[i]);
        const EvalStats s = evaluate(*local, env_cfg, spec.episodes, spec.seed, &vessel);
        curve.points[i] = {grid[i], s.mean_return, s.std_return, s.success_rate, s.collision_rate, s.n_episodes};
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = grid.size();
    }
  };
  const int n_threads = std::clamp(threads, 1, static_cast<int>(grid.size()));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return curve;
}

std::string sweep_csv(const SweepCurve& curve) {
  std::ostringstream out;
  out << "# portnav-sweep v1 param=" << to_string(curve.param) << " nominal=" << format_double(curve.nominal)
      << " config_hash=" << curve.config_hash << "\n";
  out << "param,value,mean_return,std_return,success_rate,collision_rate,n_episodes\n";
  for (const SweepPoint& p : curve.points) {
    out << to_string(curve.param) << ',' << format_double(p.value) << ',' << format_double(p.mean_return) << ','
        << format_double(p.std_return) << ',' << format_double(p.success_rate) << ','
        << format_double(p.collision_rate) << ',' << p.n_episodes << '\n';
  }
  return out.str();
}

void write_sweep_csv(const SweepCurve& curve, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << sweep_csv(curve);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

std::string header_field(const std::string& line, const std::string& key) {
  const std::string tag = " " + key + "=";
  const auto pos = line.find(tag);
  if (pos == std::string::npos) throw std::runtime_error("sweep CSV header lacks " + key);
  const auto start = pos + tag.size();
  return line.substr(start, line.find(' ', start) - start);
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad number in sweep CSV: " + s);
  return v;
}

}  // namespace

SweepCurve read_sweep_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("# portnav-sweep v1", 0) != 0) {
    throw std::runtime_error(path.string() + " is not a sweep CSV");
  }
  SweepCurve curve;
  curve.param = sweep_param_from_string(header_field(line, "param"));
  curve.nominal = parse_number(header_field(line, "nominal"));
  curve.config_hash = header_field(line, "config_hash");
  std::getline(in, line);  // column names
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() != 7) throw std::runtime_error("sweep CSV row has " + std::to_string(cells.size()) + " columns");
    SweepPoint p;
    p.value = parse_number(cells[1]);
    p.mean_return = parse_number(cells[2]);
    p.std_return = parse_number(cells[3]);
    p.success_rate = parse_number(cells[4]);
    p.collision_rate = parse_number(cells[5]);
    p.n_episodes = std::stoi(cells[6]);
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace portnav
