#include "portnav/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "portnav/config.hpp"
#include "portnav/errors.hpp"

namespace portnav {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t episode_seed(std::uint64_t master, std::uint64_t worker, std::uint64_t k) {
  return splitmix64(splitmix64(splitmix64(master) ^ (worker + 1)) + k);
}

EvalStats summarize(std::span<const EpisodeSummary> episodes) {
  EvalStats s;
  s.n_episodes = static_cast<int>(episodes.size());
  if (episodes.empty()) return s;
  double sum = 0.0;
  double len = 0.0;
  int goals = 0;
  int collisions = 0;
  for (const EpisodeSummary& e : episodes) {
    s.returns.push_back(e.episode_return);
    sum += e.episode_return;
    len += e.length;
    goals += e.outcome == Outcome::Goal;
    collisions += e.outcome == Outcome::Collision;
  }
  const double n = static_cast<double>(episodes.size());
  s.mean_return = sum / n;
  double var = 0.0;
  for (double r : s.returns) var += (r - s.mean_return) * (r - s.mean_return);
  s.std_return = std::sqrt(var / n);
  s.success_rate = goals / n;
  s.collision_rate = collisions / n;
  s.mean_length = len / n;
  return s;
}

EpisodeSummary run_episode(Env& env, const Policy& policy, std::uint64_t seed, ActMode mode, std::mt19937_64& rng,
                           const VesselParams* vessel, EpisodeRecorder* recorder) {
  std::vector<double> obs = env.reset(seed).to_vector();
  if (vessel != nullptr) env.set_vessel_params(*vessel);
  if (recorder != nullptr) recorder->begin(0, seed, env);
  EpisodeSummary out;
  while (!env.done()) {
    const ControlInput u = clamp(to_control(policy.act(obs, mode, rng), env.vessel_params()), env.vessel_params());
    const StepResult res = env.step(u);
    if (recorder != nullptr) recorder->record(env, u, res);
    out.episode_return += res.reward;
    ++out.length;
    if (res.info.collision) out.outcome = Outcome::Collision;
    else if (res.info.goal) out.outcome = Outcome::Goal;
    obs = res.observation.to_vector();
  }
  return out;
}

EvalStats evaluate(const Policy& policy, const EnvConfig& env_cfg, int n_episodes, std::uint64_t seed,
                   const VesselParams* vessel, TrajectoryLogWriter* log) {
  if (n_episodes < 1) throw InvalidConfig("evaluate: n_episodes must be >= 1");
  Env env(env_cfg);
  // Deterministic actions never draw from this generator.
  std::mt19937_64 rng(seed);
  std::vector<EpisodeSummary> episodes;
  for (int i = 0; i < n_episodes; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    if (log != nullptr) {
      EpisodeRecorder rec;
      episodes.push_back(run_episode(env, policy, s, ActMode::Deterministic, rng, vessel, &rec));
      EpisodeRecord r = rec.take();
      r.episode = static_cast<std::uint64_t>(i);
      log->write(r);
    } else {
      episodes.push_back(run_episode(env, policy, s, ActMode::Deterministic, rng, vessel));
    }
  }
  return summarize(episodes);
}

std::unique_ptr<Agent> load_agent(const Checkpoint& ckpt, const RunConfig& cfg) {
  const std::string expected = config_hash(cfg);
  if (ckpt.config_hash != expected) {
    throw ConfigMismatch("checkpoint was written under config hash " + ckpt.config_hash +
                         " but the current configuration hashes to " + expected +
                         "; evaluate with the configuration the policy was trained with");
  }
  if (ckpt.agent != to_string(cfg.agent.kind)) {
    throw ConfigMismatch("checkpoint holds a '" + ckpt.agent + "' agent, config asks for '" +
                         to_string(cfg.agent.kind) + "'");
  }
  auto agent = make_agent(cfg.agent, Observation::size(cfg.env.sensor.n_rays), 0);
  agent->load(ckpt.archive);
  return agent;
}

std::unique_ptr<Agent> load_agent(const std::filesystem::path& path, const RunConfig& cfg) {
  return load_agent(load_checkpoint(path), cfg);
}

std::unique_ptr<Policy> make_policy(const RunConfig& cfg, const std::optional<std::filesystem::path>& checkpoint) {
  if (cfg.agent.kind == AgentKind::Scripted) return std::make_unique<ScriptedPursuit>(cfg.env.sensor, cfg.env.vessel);
  if (!checkpoint) throw UsageError("a checkpoint is required for agent type '" + std::string(to_string(cfg.agent.kind)) + "'");
  return load_agent(*checkpoint, cfg);
}

// ---------------------------------------------------------------------------

namespace {

struct StepOutput {
  Transition transition;
  std::optional<EpisodeSummary> finished;
};

/// One rollout worker's env and episode bookkeeping.
class Collector {
 public:
  Collector(const RunConfig& cfg, std::uint64_t worker)
      : cfg_(cfg), worker_(worker), env_(cfg.env), rng_(episode_seed(cfg.trainer.seed, worker, ~0ULL)) {}

  bool needs_policy() const { return !started_ || env_.done(); }

  void begin_episode() {
    obs_ = env_.reset(episode_seed(cfg_.trainer.seed, worker_, episode_++)).to_vector();
    current_ = {};
    started_ = true;
  }

  /// `random_action` selects uniform exploration (warm-up); otherwise the
  /// snapshot's stochastic action is used.
  StepOutput step(const Policy& policy, bool random_action) {
    if (needs_policy()) begin_episode();
    Action a;
    if (random_action) {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      a = {u(rng_), u(rng_)};
    } else {
      a = policy.act(obs_, ActMode::Stochastic, rng_);
    }
    const StepResult res = env_.step(to_control(a, env_.vessel_params()));
    StepOutput out;
    out.transition.obs = obs_;
    out.transition.action = a;
    out.transition.reward = res.reward;
    out.transition.next_obs = res.observation.to_vector();
    out.transition.done = res.terminated;
    current_.episode_return += res.reward;
    ++current_.length;
    if (res.info.collision) current_.outcome = Outcome::Collision;
    else if (res.info.goal) current_.outcome = Outcome::Goal;
    obs_ = out.transition.next_obs;
    if (env_.done()) out.finished = current_;
    return out;
  }

 private:
  const RunConfig& cfg_;
  std::uint64_t worker_;
  Env env_;
  std::mt19937_64 rng_;
  std::vector<double> obs_;
  EpisodeSummary current_;
  std::uint64_t episode_ = 0;
  bool started_ = false;
};

std::string csv_number(double v) { return std::isnan(v) ? "nan" : format_double(v); }

/// Replay buffer owner, update schedule, metrics sink and checkpointing.
class Learner {
 public:
  Learner(const RunConfig& cfg, const std::filesystem::path& out_dir)
      : cfg_(cfg),
        out_dir_(out_dir),
        hash_(config_hash(cfg)),
        agent_(make_agent(cfg.agent, Observation::size(cfg.env.sensor.n_rays), episode_seed(cfg.trainer.seed, ~0ULL, 0))),
        buffer_(cfg.agent.buffer_capacity, Observation::size(cfg.env.sensor.n_rays)),
        rng_(episode_seed(cfg.trainer.seed, ~0ULL, 1)) {
    std::filesystem::create_directories(out_dir_);
    result_.metrics = out_dir_ / "metrics.csv";
    save_checkpoint_now();
    if (cfg_.trainer.steps > 0) {
      metrics_.open(result_.metrics);
      if (!metrics_) throw std::runtime_error("cannot write " + result_.metrics.string());
      metrics_ << "# portnav-metrics schema=" << kMetricsSchemaVersion << " config_hash=" << hash_
               << " agent=" << to_string(cfg_.agent.kind) << "\n"
               << "env_steps,episodes,mean_return,std_return,success_rate,episode_len,critic_loss,actor_loss,alpha,"
                  "entropy\n";
    }
  }

  const Agent& agent() const { return *agent_; }
  std::unique_ptr<Policy> snapshot() const { return agent_->snapshot(); }
  std::uint64_t inserted() const { return result_.buffer_insertions; }

  void ingest(StepOutput&& s) {
    buffer_.add(s.transition);
    ++result_.buffer_insertions;
    if (s.finished) {
      result_.episode_log.push_back(*s.finished);
      ++result_.episodes;
    }
    const std::uint64_t n = result_.buffer_insertions;
    if (n > static_cast<std::uint64_t>(cfg_.agent.warmup_steps) &&
        buffer_.size() >= static_cast<std::size_t>(cfg_.agent.batch_size)) {
      debt_ += cfg_.agent.updates_per_step;
      while (debt_ >= 1.0) {
        debt_ -= 1.0;
        const UpdateReport r = agent_->update(buffer_.sample(static_cast<std::size_t>(cfg_.agent.batch_size), rng_), rng_);
        ++result_.updates;
        critic_sum_ += r.critic_loss;
        ++critic_n_;
        if (r.actor_updated) {
          actor_sum_ += r.actor_loss;
          alpha_sum_ += r.alpha;
          entropy_sum_ += r.entropy;
          ++actor_n_;
        }
      }
    }
    if (n % cfg_.trainer.log_every == 0 || n == cfg_.trainer.steps) write_metrics_row();
    if (n % cfg_.trainer.checkpoint_every == 0 || n == cfg_.trainer.steps) save_checkpoint_now();
  }

  TrainResult finish(std::uint64_t produced) {
    const std::uint64_t n = result_.buffer_insertions;
    if (n > 0 && n < cfg_.trainer.steps) {
      write_metrics_row();
      save_checkpoint_now();
    }
    metrics_.close();
    result_.env_steps = produced;
    return std::move(result_);
  }

 private:
  void write_metrics_row() {
    const std::size_t w = static_cast<std::size_t>(cfg_.trainer.metrics_window);
    const auto& log = result_.episode_log;
    const std::size_t start = log.size() > w ? log.size() - w : 0;
    const EvalStats s = summarize(std::span<const EpisodeSummary>(log).subspan(start));
    const double nan = std::nan("");
    const bool have = s.n_episodes > 0;
    const bool kind_sac = cfg_.agent.kind == AgentKind::Sac;
    metrics_ << result_.buffer_insertions << ',' << result_.episodes << ',' << csv_number(have ? s.mean_return : nan)
             << ',' << csv_number(have ? s.std_return : nan) << ',' << csv_number(have ? s.success_rate : nan) << ','
             << csv_number(have ? s.mean_length : nan) << ','
             << csv_number(critic_n_ ? critic_sum_ / critic_n_ : nan) << ','
             << csv_number(actor_n_ ? actor_sum_ / actor_n_ : nan) << ','
             << csv_number(actor_n_ && kind_sac ? alpha_sum_ / actor_n_ : nan) << ','
             << csv_number(actor_n_ && kind_sac ? entropy_sum_ / actor_n_ : nan) << '\n';
    metrics_.flush();
    critic_sum_ = actor_sum_ = alpha_sum_ = entropy_sum_ = 0.0;
    critic_n_ = actor_n_ = 0;
  }

  void save_checkpoint_now() {
    Checkpoint ckpt;
    ckpt.agent = to_string(cfg_.agent.kind);
    ckpt.config_hash = hash_;
    ckpt.config_text = to_ini(cfg_);
    ckpt.env_steps = result_.buffer_insertions;
    std::ostringstream rng_state;
    rng_state << rng_;
    ckpt.rng_state = rng_state.str();
    agent_->save(ckpt.archive);
    char name[64];
    std::snprintf(name, sizeof(name), "checkpoint_%010llu.pnck",
                  static_cast<unsigned long long>(result_.buffer_insertions));
    result_.last_checkpoint = out_dir_ / name;
    save_checkpoint(ckpt, result_.last_checkpoint);
  }

  const RunConfig& cfg_;
  std::filesystem::path out_dir_;
  std::string hash_;
  std::unique_ptr<Agent> agent_;
  ReplayBuffer buffer_;
  std::mt19937_64 rng_;
  std::ofstream metrics_;
  TrainResult result_;
  double debt_ = 0.0;
  double critic_sum_ = 0.0, actor_sum_ = 0.0, alpha_sum_ = 0.0, entropy_sum_ = 0.0;
  int critic_n_ = 0, actor_n_ = 0;
};

TrainResult train_single(const RunConfig& cfg, Learner& learner, const std::atomic<bool>* stop) {
  Collector collector(cfg, 0);
  std::unique_ptr<Policy> policy = learner.snapshot();
  const auto warmup = static_cast<std::uint64_t>(cfg.agent.warmup_steps);
  std::uint64_t produced = 0;
  try {
    while (produced < cfg.trainer.steps && !(stop && stop->load())) {
      if (collector.needs_policy()) policy = learner.snapshot();
      StepOutput s = collector.step(*policy, produced < warmup);
      ++produced;
      learner.ingest(std::move(s));
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("worker 0 failed: ") + e.what());
  }
  return learner.finish(produced);
}

TrainResult train_parallel(const RunConfig& cfg, Learner& learner, const std::atomic<bool>* stop) {
  const int workers = cfg.trainer.workers;
  const std::uint64_t budget = cfg.trainer.steps;
  const auto warmup = static_cast<std::uint64_t>(cfg.agent.warmup_steps);

  std::mutex mu;
  std::condition_variable worker_cv;
  std::condition_variable learner_cv;
  std::deque<StepOutput> queue;
  std::shared_ptr<const Policy> published = learner.snapshot();
  std::atomic<std::uint64_t> reserved{0};
  std::uint64_t consumed = 0;
  int running = workers;
  bool abort = false;
  std::string error;
  std::vector<std::uint64_t> produced(static_cast<std::size_t>(workers), 0);

  auto worker_main = [&](int w) {
    try {
      Collector collector(cfg, static_cast<std::uint64_t>(w));
      std::shared_ptr<const Policy> policy;
      while (true) {
        {
          std::unique_lock lock(mu);
          worker_cv.wait(lock, [&] { return abort || reserved.load() >= budget || reserved.load() < consumed + cfg.trainer.max_lag; });
          if (abort) break;
          if (collector.needs_policy() || !policy) policy = published;
        }
        if (stop && stop->load()) break;
        const std::uint64_t index = reserved.fetch_add(1);
        if (index >= budget) break;
        StepOutput s = collector.step(*policy, index < warmup);
        ++produced[static_cast<std::size_t>(w)];
        {
          std::lock_guard lock(mu);
          queue.push_back(std::move(s));
        }
        learner_cv.notify_one();
      }
    } catch (const std::exception& e) {
      std::lock_guard lock(mu);
      if (!abort) error = "worker " + std::to_string(w) + " failed: " + e.what();
      abort = true;
      worker_cv.notify_all();
    }
    {
      std::lock_guard lock(mu);
      --running;
    }
    learner_cv.notify_one();
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) threads.emplace_back(worker_main, w);

  std::string learner_error;
  try {
    while (true) {
      std::deque<StepOutput> batch;
      {
        std::unique_lock lock(mu);
        learner_cv.wait(lock, [&] { return !queue.empty() || running == 0 || abort; });
        if (abort) break;
        if (queue.empty() && running == 0) break;
        batch.swap(queue);
      }
      for (StepOutput& s : batch) learner.ingest(std::move(s));
      std::shared_ptr<const Policy> fresh = learner.snapshot();
      {
        std::lock_guard lock(mu);
        consumed = learner.inserted();
        published = std::move(fresh);
      }
      worker_cv.notify_all();
    }
  } catch (const std::exception& e) {
    learner_error = std::string("learner failed: ") + e.what();
    std::lock_guard lock(mu);
    abort = true;
  }
  worker_cv.notify_all();
  for (std::thread& t : threads) t.join();
  if (!error.empty()) throw std::runtime_error(error);
  if (!learner_error.empty()) throw std::runtime_error(learner_error);

  std::uint64_t total = 0;
  for (std::uint64_t p : produced) total += p;
  return learner.finish(total);
}

}  // namespace

TrainResult train(const RunConfig& cfg, const std::filesystem::path& out_dir, const std::atomic<bool>* stop) {
  validate(cfg);
  if (cfg.agent.kind == AgentKind::Scripted) throw InvalidConfig("train: agent.type must be sac or baseline");
  Learner learner(cfg, out_dir);
  if (cfg.trainer.steps == 0) return learner.finish(0);
  if (cfg.trainer.workers == 1) return train_single(cfg, learner, stop);
  return train_parallel(cfg, learner, stop);
}

}  // namespace portnav
