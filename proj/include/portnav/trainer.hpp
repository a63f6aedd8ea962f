#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "portnav/agents.hpp"
#include "portnav/checkpoint.hpp"
#include "portnav/env.hpp"
#include "portnav/trajectory_log.hpp"

namespace portnav {

struct RunConfig;

struct TrainerConfig {
  int workers = 20;
  std::uint64_t steps = 100000;  // env-step budget
  std::uint64_t checkpoint_every = 10000;
  std::uint64_t log_every = 1000;
  std::uint64_t seed = 0;
  std::string out = "runs/default";
  int metrics_window = 20;       // episodes averaged per metrics row
  std::uint64_t max_lag = 2000;  // env steps workers may run ahead of the learner
};

struct EvalConfig {
  int episodes = 20;
  std::uint64_t seed = 1000000;
};

void validate(const TrainerConfig& cfg);

/// Statistics over undiscounted episode returns. std is the population
/// standard deviation, so a single episode has std 0.
struct EvalStats {
  int n_episodes = 0;
  double mean_return = 0.0;
  double std_return = 0.0;
  double success_rate = 0.0;
  double collision_rate = 0.0;
  double mean_length = 0.0;
  std::vector<double> returns;  // per episode, in seed order

  bool operator==(const EvalStats&) const = default;
};

struct EpisodeSummary {
  double episode_return = 0.0;
  int length = 0;
  Outcome outcome = Outcome::Timeout;
};

EvalStats summarize(std::span<const EpisodeSummary> episodes);

/// Seed of episode `k` run by worker `w` under master seed `master`.
std::uint64_t episode_seed(std::uint64_t master, std::uint64_t worker, std::uint64_t k);

/// Runs one full episode. When `vessel` is set it replaces the env's vessel
/// parameters right after reset. When `recorder` is set every step is logged.
EpisodeSummary run_episode(Env& env, const Policy& policy, std::uint64_t seed, ActMode mode, std::mt19937_64& rng,
                           const VesselParams* vessel = nullptr, EpisodeRecorder* recorder = nullptr);

/// Deterministic-policy evaluation on seeds seed, seed+1, ..., seed+n-1.
EvalStats evaluate(const Policy& policy, const EnvConfig& env_cfg, int n_episodes, std::uint64_t seed,
                   const VesselParams* vessel = nullptr, TrajectoryLogWriter* log = nullptr);

/// Rebuilds an agent from a checkpoint. Throws ConfigMismatch when the
/// checkpoint was written under a different configuration hash.
std::unique_ptr<Agent> load_agent(const Checkpoint& ckpt, const RunConfig& cfg);
std::unique_ptr<Agent> load_agent(const std::filesystem::path& path, const RunConfig& cfg);

/// Policy named by cfg.agent: a scripted controller needs no checkpoint;
/// learned agents require `checkpoint`.
std::unique_ptr<Policy> make_policy(const RunConfig& cfg, const std::optional<std::filesystem::path>& checkpoint);

struct TrainResult {
  std::filesystem::path last_checkpoint;
  std::filesystem::path metrics;
  std::uint64_t env_steps = 0;          // transitions produced by workers
  std::uint64_t buffer_insertions = 0;  // transitions the learner stored
  std::uint64_t updates = 0;
  std::uint64_t episodes = 0;
  std::vector<EpisodeSummary> episode_log;  // completed training episodes, in learner order
};

// Metrics CSV (schema 1):
//   # portnav-metrics schema=1 config_hash=<hex> agent=<kind>
//   env_steps,episodes,mean_return,std_return,success_rate,episode_len,critic_loss,actor_loss,alpha,entropy
// One row every log_every env steps plus one at the end of the budget. Return
// columns cover the last metrics_window completed episodes; loss columns
// average the updates since the previous row; "nan" marks empty windows.
inline constexpr int kMetricsSchemaVersion = 1;

/// W rollout workers (threads when W > 1) feed one replay buffer and learner
/// until cfg.trainer.steps env steps have been collected. With W = 1 the run is
/// single-threaded and bit-reproducible from the master seed. Setting `stop`
/// ends collection early; the steps gathered so far still get a final metrics
/// row and checkpoint.
TrainResult train(const RunConfig& cfg, const std::filesystem::path& out_dir,
                  const std::atomic<bool>* stop = nullptr);

}  // namespace portnav
