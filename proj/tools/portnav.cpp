// portnav: train, evaluate, sweep, rollout, replay, audit and scene commands
// over one INI config. Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "portnav/config.hpp"
#include "portnav/errors.hpp"
#include "portnav/plot.hpp"
#include "portnav/scene_io.hpp"
#include "portnav/sweep.hpp"
#include "portnav/trainer.hpp"

namespace {

using namespace portnav;
namespace fs = std::filesystem;

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted.store(true); }

struct ConfigOptions {
  std::string path;
  std::vector<std::string> overrides;

  void add_to(CLI::App* cmd) {
    cmd->add_option("-c,--config", path, "INI config file");
    cmd->add_option("--set", overrides, "Override a key, e.g. --set trainer.seed=7 (repeatable)");
  }

  // Without --config, a checkpoint's embedded config is used when available.
  RunConfig resolve(const Checkpoint* ckpt = nullptr) const {
    if (!path.empty()) {
      if (!fs::exists(path)) throw UsageError("config file not found: " + path);
      return load_config(fs::path(path), overrides);
    }
    if (ckpt != nullptr) {
      RunConfig cfg = parse_config(ckpt->config_text, overrides);
      if (const char* out = std::getenv(kOutDirEnv); out != nullptr && *out != '\0') cfg.trainer.out = out;
      return cfg;
    }
    return load_config(std::nullopt, overrides);
  }
};

std::string stats_json(const EvalStats& s) {
  nlohmann::json j;
  j["episodes"] = s.n_episodes;
  j["mean_return"] = s.mean_return;
  j["std_return"] = s.std_return;
  j["success_rate"] = s.success_rate;
  j["collision_rate"] = s.collision_rate;
  j["mean_length"] = s.mean_length;
  j["returns"] = s.returns;
  return j.dump();
}

std::optional<Checkpoint> maybe_checkpoint(const std::string& path) {
  if (path.empty()) return std::nullopt;
  if (!fs::exists(path)) throw UsageError("checkpoint not found: " + path);
  return load_checkpoint(path);
}

std::unique_ptr<Policy> policy_for(const RunConfig& cfg, const std::optional<Checkpoint>& ckpt) {
  if (cfg.agent.kind == AgentKind::Scripted) return std::make_unique<ScriptedPursuit>(cfg.env.sensor, cfg.env.vessel);
  if (!ckpt) throw UsageError("--checkpoint is required for agent type '" + std::string(to_string(cfg.agent.kind)) + "'");
  return load_agent(*ckpt, cfg);
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream in(text);
  for (std::string cell; std::getline(in, cell, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      while (used < cell.size() && cell[used] == ' ') ++used;
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": cannot parse '" + cell + "' as a number");
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + " is empty");
  return out;
}

std::vector<double> parse_range_grid(const std::string& text, const char* flag, bool log) {
  const std::vector<double> v = parse_list(text, flag);
  if (v.size() != 3 || v[2] < 1 || v[2] != static_cast<int>(v[2])) {
    throw UsageError(std::string(flag) + " expects lo,hi,count");
  }
  if (!(v[0] > 0.0) || !(v[1] > 0.0)) throw UsageError(std::string(flag) + " bounds must be > 0");
  return log ? log_grid(v[0], v[1], static_cast<int>(v[2])) : linear_grid(v[0], v[1], static_cast<int>(v[2]));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Port navigation simulator, agents and robustness sweeps"};
  app.require_subcommand(1);

  // train
  ConfigOptions train_cfg;
  std::optional<std::uint64_t> train_steps, train_seed;
  std::optional<int> train_workers;
  std::string train_out;
  auto* train_cmd = app.add_subcommand("train", "Train an agent; writes checkpoints and metrics.csv");
  train_cfg.add_to(train_cmd);
  train_cmd->add_option("--steps", train_steps, "Env-step budget (trainer.steps)");
  train_cmd->add_option("--workers", train_workers, "Rollout workers (trainer.workers)");
  train_cmd->add_option("--seed", train_seed, "Master seed (trainer.seed)");
  train_cmd->add_option("--out", train_out, "Output directory (trainer.out)");

  // evaluate
  ConfigOptions eval_cfg;
  std::string eval_ckpt, eval_log;
  std::optional<int> eval_episodes;
  std::optional<std::uint64_t> eval_seed;
  auto* eval_cmd = app.add_subcommand("evaluate", "Deterministic evaluation; prints JSON statistics");
  eval_cfg.add_to(eval_cmd);
  eval_cmd->add_option("--checkpoint", eval_ckpt, "Checkpoint file (not needed for the scripted agent)");
  eval_cmd->add_option("--episodes", eval_episodes, "Episodes (eval.episodes)");
  eval_cmd->add_option("--seed", eval_seed, "First evaluation seed (eval.seed)");
  eval_cmd->add_option("--log", eval_log, "Write a trajectory log");

  // sweep
  ConfigOptions sweep_cfg;
  std::string sweep_ckpt, sweep_param, sweep_grid, sweep_linear, sweep_log, sweep_csv_path, sweep_plot;
  std::optional<int> sweep_episodes;
  std::optional<std::uint64_t> sweep_seed;
  int sweep_threads = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate across a grid of mass or turn-rate values");
  sweep_cfg.add_to(sweep_cmd);
  sweep_cmd->add_option("--checkpoint", sweep_ckpt, "Checkpoint file (not needed for the scripted agent)");
  sweep_cmd->add_option("--param", sweep_param, "mass or turn_rate")->required();
  auto* grid_opt = sweep_cmd->add_option("--grid", sweep_grid, "Explicit comma-separated values");
  auto* lin_opt = sweep_cmd->add_option("--linear", sweep_linear, "lo,hi,count evenly spaced");
  auto* log_opt = sweep_cmd->add_option("--log", sweep_log, "lo,hi,count log spaced");
  grid_opt->excludes(lin_opt)->excludes(log_opt);
  lin_opt->excludes(log_opt);
  sweep_cmd->add_option("--episodes", sweep_episodes, "Episodes per grid point (eval.episodes)");
  sweep_cmd->add_option("--seed", sweep_seed, "First evaluation seed (eval.seed)");
  sweep_cmd->add_option("--threads", sweep_threads, "Grid points evaluated concurrently")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--csv", sweep_csv_path, "Output CSV (default <trainer.out>/sweep_<param>.csv)");
  sweep_cmd->add_option("--plot", sweep_plot, "Also render an SVG line plot");

  // rollout
  ConfigOptions roll_cfg;
  std::string roll_ckpt, roll_log, roll_scene, roll_svg;
  int roll_episodes = 1;
  std::uint64_t roll_seed = 0;
  auto* roll_cmd = app.add_subcommand("rollout", "Run episodes and write a trajectory log");
  roll_cfg.add_to(roll_cmd);
  roll_cmd->add_option("--checkpoint", roll_ckpt, "Checkpoint file (not needed for the scripted agent)");
  roll_cmd->add_option("--seed", roll_seed, "Seed of the first episode");
  roll_cmd->add_option("--episodes", roll_episodes, "Number of episodes")->check(CLI::PositiveNumber);
  roll_cmd->add_option("--log", roll_log, "Trajectory log path (JSON lines)")->required();
  roll_cmd->add_option("--scene", roll_scene, "Write the first episode's scene as JSON");
  roll_cmd->add_option("--svg", roll_svg, "Render the first episode as SVG");

  // replay
  ConfigOptions replay_cfg;
  std::string replay_log, replay_scene, replay_svg;
  auto* replay_cmd = app.add_subcommand("replay", "Re-simulate a trajectory log and verify it bit for bit");
  replay_cfg.add_to(replay_cmd);
  replay_cmd->add_option("log", replay_log, "Trajectory log")->required();
  replay_cmd->add_option("--scene", replay_scene, "Scene JSON used for every episode instead of regenerating");
  replay_cmd->add_option("--svg", replay_svg, "Render the first episode's trace as SVG");

  // audit
  ConfigOptions audit_cfg;
  auto* audit_cmd = app.add_subcommand("audit", "Print the resolved config and its hash");
  audit_cfg.add_to(audit_cmd);

  // scene
  ConfigOptions scene_cfg;
  std::uint64_t scene_seed = 0;
  std::string scene_json, scene_svg_path;
  auto* scene_cmd = app.add_subcommand("scene", "Generate one scene");
  scene_cfg.add_to(scene_cmd);
  scene_cmd->add_option("--seed", scene_seed, "Scene seed");
  scene_cmd->add_option("--json", scene_json, "Write the scene as JSON");
  scene_cmd->add_option("--svg", scene_svg_path, "Render the scene as SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*train_cmd) {
      if (train_cfg.path.empty()) throw UsageError("train requires --config");
      ConfigOptions opts = train_cfg;
      if (train_steps) opts.overrides.push_back("trainer.steps=" + std::to_string(*train_steps));
      if (train_workers) opts.overrides.push_back("trainer.workers=" + std::to_string(*train_workers));
      if (train_seed) opts.overrides.push_back("trainer.seed=" + std::to_string(*train_seed));
      if (!train_out.empty()) opts.overrides.push_back("trainer.out=" + train_out);
      const RunConfig cfg = opts.resolve();
      std::signal(SIGINT, on_interrupt);
      std::signal(SIGTERM, on_interrupt);
      const TrainResult r = train(cfg, cfg.trainer.out, &g_interrupted);
      std::cout << "env_steps " << r.env_steps << "\nbuffer_insertions " << r.buffer_insertions << "\nupdates "
                << r.updates << "\nepisodes " << r.episodes << "\ncheckpoint " << r.last_checkpoint.string() << "\n";
      if (r.buffer_insertions > 0) std::cout << "metrics " << r.metrics.string() << "\n";
      if (g_interrupted) {
        std::cerr << "interrupted; partial run saved\n";
        return 1;
      }
      return 0;
    }
    if (*eval_cmd) {
      const std::optional<Checkpoint> ckpt = maybe_checkpoint(eval_ckpt);
      ConfigOptions opts = eval_cfg;
      if (eval_episodes) opts.overrides.push_back("eval.episodes=" + std::to_string(*eval_episodes));
      if (eval_seed) opts.overrides.push_back("eval.seed=" + std::to_string(*eval_seed));
      const RunConfig cfg = opts.resolve(ckpt ? &*ckpt : nullptr);
      const auto policy = policy_for(cfg, ckpt);
      std::optional<TrajectoryLogWriter> log;
      if (!eval_log.empty()) log.emplace(eval_log, config_hash(cfg));
      const EvalStats s = evaluate(*policy, cfg.env, cfg.eval.episodes, cfg.eval.seed, nullptr, log ? &*log : nullptr);
      std::cout << stats_json(s) << "\n";
      return 0;
    }
    if (*sweep_cmd) {
      SweepSpec spec;
      spec.param = sweep_param_from_string(sweep_param);
      const std::optional<Checkpoint> ckpt = maybe_checkpoint(sweep_ckpt);
      ConfigOptions opts = sweep_cfg;
      if (sweep_episodes) opts.overrides.push_back("eval.episodes=" + std::to_string(*sweep_episodes));
      if (sweep_seed) opts.overrides.push_back("eval.seed=" + std::to_string(*sweep_seed));
      const RunConfig cfg = opts.resolve(ckpt ? &*ckpt : nullptr);
      if (!sweep_grid.empty()) {
        spec.grid = parse_list(sweep_grid, "--grid");
      } else if (!sweep_linear.empty()) {
        spec.grid = parse_range_grid(sweep_linear, "--linear", false);
      } else if (!sweep_log.empty()) {
        spec.grid = parse_range_grid(sweep_log, "--log", true);
      } else {
        const DefaultGrids g = default_grids(cfg.env.vessel.mass, cfg.env.vessel.turn_rate);
        spec.grid = spec.param == SweepParam::Mass ? g.mass : g.turn_rate;
      }
      spec.episodes = cfg.eval.episodes;
      spec.seed = cfg.eval.seed;
      validate(spec);
      const auto policy = policy_for(cfg, ckpt);
      const SweepCurve curve = run_sweep(*policy, cfg.env, spec, config_hash(cfg), sweep_threads);
      const fs::path csv = sweep_csv_path.empty()
                               ? fs::path(cfg.trainer.out) / ("sweep_" + std::string(to_string(spec.param)) + ".csv")
                               : fs::path(sweep_csv_path);
      write_sweep_csv(curve, csv);
      if (!sweep_plot.empty()) write_text_file(sweep_plot, sweep_svg(curve));
      std::cout << sweep_csv(curve);
      return 0;
    }
    if (*roll_cmd) {
      const std::optional<Checkpoint> ckpt = maybe_checkpoint(roll_ckpt);
      const RunConfig cfg = roll_cfg.resolve(ckpt ? &*ckpt : nullptr);
      const auto policy = policy_for(cfg, ckpt);
      EvalStats s;
      {
        TrajectoryLogWriter log(roll_log, config_hash(cfg));
        s = evaluate(*policy, cfg.env, roll_episodes, roll_seed, nullptr, &log);
      }
      if (!roll_scene.empty() || !roll_svg.empty()) {
        const WorldScene scene = generate(roll_seed, cfg.env.world);
        if (!roll_scene.empty()) save_scene(scene, roll_scene);
        if (!roll_svg.empty()) {
          const TrajectoryLog log = read_trajectory_log(roll_log);
          std::vector<VesselState> trace{log.episodes.front().initial_pose};
          for (const StepRecord& st : log.episodes.front().steps) trace.push_back(st.pose);
          write_text_file(roll_svg, scene_svg(scene, trace));
        }
      }
      std::cout << stats_json(s) << "\n";
      return 0;
    }
    if (*replay_cmd) {
      if (!fs::exists(replay_log)) throw UsageError("trajectory log not found: " + replay_log);
      const RunConfig cfg = replay_cfg.resolve();
      const TrajectoryLog log = read_trajectory_log(replay_log);
      const std::string hash = config_hash(cfg);
      if (log.config_hash != hash) {
        throw ConfigMismatch("config hash mismatch: log was written under " + log.config_hash +
                             ", current config hashes to " + hash);
      }
      std::optional<WorldScene> scene;
      if (!replay_scene.empty()) scene = load_scene(replay_scene);
      std::size_t steps = 0;
      for (const EpisodeRecord& ep : log.episodes) {
        if (const auto m = replay_episode(cfg.env, ep, scene ? &*scene : nullptr)) {
          std::cerr << "divergence in episode " << m->episode << " at step " << m->t << " (" << m->field
                    << "): " << m->detail << "\n";
          return 1;
        }
        steps += ep.steps.size();
      }
      if (!replay_svg.empty() && !log.episodes.empty()) {
        const EpisodeRecord& ep = log.episodes.front();
        const WorldScene s = scene ? *scene : generate(ep.seed, cfg.env.world);
        std::vector<VesselState> trace{ep.initial_pose};
        for (const StepRecord& st : ep.steps) trace.push_back(st.pose);
        write_text_file(replay_svg, scene_svg(s, trace));
      }
      std::cout << "replay ok: " << log.episodes.size() << " episodes, " << steps << " steps\n";
      return 0;
    }
    if (*audit_cmd) {
      const RunConfig cfg = audit_cfg.resolve();
      std::cout << "# config_hash=" << config_hash(cfg) << "\n" << to_ini(cfg);
      return 0;
    }
    if (*scene_cmd) {
      const RunConfig cfg = scene_cfg.resolve();
      const WorldScene scene = generate(scene_seed, cfg.env.world);
      if (!scene_json.empty()) save_scene(scene, scene_json);
      if (!scene_svg_path.empty()) write_text_file(scene_svg_path, scene_svg(scene));
      if (scene_json.empty() && scene_svg_path.empty()) std::cout << to_json(scene).dump(2) << "\n";
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidConfig& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
