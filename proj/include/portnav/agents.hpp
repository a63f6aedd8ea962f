#pragma once

#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "portnav/checkpoint.hpp"
#include "portnav/kinematics.hpp"
#include "portnav/nn.hpp"
#include "portnav/replay_buffer.hpp"
#include "portnav/sensor.hpp"

namespace portnav {

enum class AgentKind { Sac, Baseline, Scripted };
const char* to_string(AgentKind k);
AgentKind agent_kind_from_string(const std::string& s);

struct AgentConfig {
  AgentKind kind = AgentKind::Sac;
  std::vector<int> hidden{256, 256};
  double lr = 3e-4;
  double tau = 0.005;
  int batch_size = 256;
  std::size_t buffer_capacity = 1000000;
  double gamma = 0.99;  // copied from the env section when resolved
  // SAC
  double target_entropy = -2.0;
  double init_alpha = 0.2;
  bool auto_alpha = true;
  double log_std_min = -5.0;
  double log_std_max = 2.0;
  // Deterministic baseline
  double exploration_noise = 0.1;
  double target_noise = 0.2;
  double target_noise_clip = 0.5;
  int policy_delay = 2;
  // Shared schedule
  int warmup_steps = 1000;
  double updates_per_step = 1.0;
};

void validate(const AgentConfig& cfg);

enum class ActMode { Stochastic, Deterministic };

/// Maps a normalised action onto physical thrust and rudder.
ControlInput to_control(const Action& a, const VesselParams& params);

/// Anything that maps an observation vector to a normalised action.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action act(std::span<const double> obs, ActMode mode, std::mt19937_64& rng) const = 0;
  virtual std::unique_ptr<Policy> clone() const = 0;
  virtual std::string name() const = 0;
};

struct UpdateReport {
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double alpha = 0.0;
  double entropy = 0.0;  // -mean log pi on the batch (SAC only)
  bool actor_updated = false;
};

/// Learner interface used by the trainer. `snapshot` hands rollout workers a
/// read-only copy of the acting network.
class Agent : public Policy {
 public:
  virtual AgentKind kind() const = 0;
  virtual UpdateReport update(const Batch& batch, std::mt19937_64& rng) = 0;
  virtual std::unique_ptr<Policy> snapshot() const = 0;
  virtual void save(TensorArchive& out) const = 0;
  virtual void load(const TensorArchive& in) = 0;
};

/// Builds a learning agent of cfg.kind (Sac or Baseline) with seeded weights.
std::unique_ptr<Agent> make_agent(const AgentConfig& cfg, std::size_t obs_dim, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Soft actor-critic

/// Tanh-squashed diagonal Gaussian head. The actor outputs [mean(2), raw(2)]
/// and log_std = lo + (hi - lo) * (tanh(raw) + 1) / 2 keeps the scale bounded
/// while staying differentiable.
class SquashedGaussian {
 public:
  SquashedGaussian(double log_std_min, double log_std_max) : lo_(log_std_min), hi_(log_std_max) {}

  struct Sample {
    nn::Matrix mean;     // 2 x B
    nn::Matrix log_std;  // 2 x B
    nn::Matrix pre_tanh; // 2 x B
    nn::Matrix action;   // 2 x B, tanh(pre_tanh)
    nn::Vector log_prob; // B
  };

  /// Reparameterised sample for fixed standard-normal `noise` (2 x B).
  Sample sample(const nn::Matrix& actor_out, const nn::Matrix& noise) const;

  /// d(loss)/d(actor_out) given d(loss)/d(action) and d(loss)/d(log_prob),
  /// both holding `noise` fixed.
  nn::Matrix backprop(const nn::Matrix& actor_out, const nn::Matrix& noise, const Sample& s,
                      const nn::Matrix& d_action, const nn::Vector& d_log_prob) const;

  double log_std_min() const { return lo_; }
  double log_std_max() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

class SacPolicy : public Policy {
 public:
  SacPolicy(nn::Mlp actor, SquashedGaussian head) : actor_(std::move(actor)), head_(head) {}
  Action act(std::span<const double> obs, ActMode mode, std::mt19937_64& rng) const override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<SacPolicy>(*this); }
  std::string name() const override { return "sac"; }

 private:
  nn::Mlp actor_;
  SquashedGaussian head_;
};

class SacAgent : public Agent {
 public:
  SacAgent(const AgentConfig& cfg, std::size_t obs_dim, std::uint64_t seed);

  Action act(std::span<const double> obs, ActMode mode, std::mt19937_64& rng) const override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<SacAgent>(*this); }
  std::string name() const override { return "sac"; }
  AgentKind kind() const override { return AgentKind::Sac; }

  /// Critic step, actor step, temperature step, then Polyak averaging. A
  /// non-finite loss restores every parameter and throws InvalidState.
  UpdateReport update(const Batch& batch, std::mt19937_64& rng) override;
  std::unique_ptr<Policy> snapshot() const override;
  void save(TensorArchive& out) const override;
  void load(const TensorArchive& in) override;

  /// Twin-Q soft Bellman loss 0.5 * mean((Q_i - y)^2) summed over both
  /// critics; `next_noise` fixes the next-state action sample. Gradients are
  /// accumulated into the optional buffers.
  double critic_loss(const Batch& batch, const nn::Matrix& next_noise, nn::MlpGradients* q1_grad,
                     nn::MlpGradients* q2_grad) const;

  struct ActorLoss {
    double loss = 0.0;
    double mean_log_prob = 0.0;
  };
  /// mean(alpha * log pi(a|s) - min_i Q_i(s, a)) with a reparameterised by `noise`.
  ActorLoss actor_loss(const Batch& batch, const nn::Matrix& noise, nn::MlpGradients* actor_grad) const;

  double alpha() const;
  double log_alpha() const noexcept { return log_alpha_; }
  void set_log_alpha(double v) noexcept { log_alpha_ = v; }

  nn::Mlp& actor() { return actor_; }
  nn::Mlp& q1() { return q1_; }
  nn::Mlp& q2() { return q2_; }
  const nn::Mlp& q1_target() const { return q1_target_; }
  const nn::Mlp& q2_target() const { return q2_target_; }
  const AgentConfig& config() const { return cfg_; }
  const SquashedGaussian& head() const { return head_; }

 private:
  nn::Matrix critic_input(const nn::Matrix& obs, const nn::Matrix& action) const;

  AgentConfig cfg_;
  std::size_t obs_dim_;
  SquashedGaussian head_;
  nn::Mlp actor_;
  nn::Mlp q1_;
  nn::Mlp q2_;
  nn::Mlp q1_target_;
  nn::Mlp q2_target_;
  nn::AdamState actor_opt_;
  nn::AdamState q1_opt_;
  nn::AdamState q2_opt_;
  nn::AdamState alpha_opt_;
  double log_alpha_;
};

// ---------------------------------------------------------------------------
// Deterministic actor-critic baseline (twin critics, target smoothing and
// delayed actor updates). It has no entropy term and acts as the
// non-maximum-entropy comparator in robustness sweeps.

class DeterministicPolicy : public Policy {
 public:
  DeterministicPolicy(nn::Mlp actor, double noise_std) : actor_(std::move(actor)), noise_std_(noise_std) {}
  Action act(std::span<const double> obs, ActMode mode, std::mt19937_64& rng) const override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<DeterministicPolicy>(*this); }
  std::string name() const override { return "baseline"; }

 private:
  nn::Mlp actor_;
  double noise_std_;
};

class BaselineAgent : public Agent {
 public:
  BaselineAgent(const AgentConfig& cfg, std::size_t obs_dim, std::uint64_t seed);

  Action act(std::span<const double> obs, ActMode mode, std::mt19937_64& rng) const override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<BaselineAgent>(*this); }
  std::string name() const override { return "baseline"; }
  AgentKind kind() const override { return AgentKind::Baseline; }

  UpdateReport update(const Batch& batch, std::mt19937_64& rng) override;
  std::unique_ptr<Policy> snapshot() const override;
  void save(TensorArchive& out) const override;
  void load(const TensorArchive& in) override;

  /// `target_noise` (2 x B) is the raw smoothing noise before clipping.
  double critic_loss(const Batch& batch, const nn::Matrix& target_noise, nn::MlpGradients* q1_grad,
                     nn::MlpGradients* q2_grad) const;
  /// -mean Q1(s, tanh(actor(s))).
  double actor_loss(const Batch& batch, nn::MlpGradients* actor_grad) const;

  nn::Mlp& actor() { return actor_; }
  nn::Mlp& q1() { return q1_; }
  nn::Mlp& q2() { return q2_; }
  const AgentConfig& config() const { return cfg_; }

 private:
  nn::Matrix critic_input(const nn::Matrix& obs, const nn::Matrix& action) const;

  AgentConfig cfg_;
  std::size_t obs_dim_;
  nn::Mlp actor_;
  nn::Mlp q1_;
  nn::Mlp q2_;
  nn::Mlp actor_target_;
  nn::Mlp q1_target_;
  nn::Mlp q2_target_;
  nn::AdamState actor_opt_;
  nn::AdamState q1_opt_;
  nn::AdamState q2_opt_;
  long updates_ = 0;
};

// ---------------------------------------------------------------------------
// Hand-written controller used to sanity-check environments.

/// Turns toward the goal and holds a cruise speed, slowing and veering toward
/// the more open side when the forward rays are short. Stateless; relies only
/// on the observation vector plus the nominal vessel and sensor parameters.
class ScriptedPursuit : public Policy {
 public:
  ScriptedPursuit(const SensorConfig& sensor, const VesselParams& nominal);

  Action act(std::span<const double> obs, ActMode mode, std::mt19937_64& rng) const override;
  Action act(std::span<const double> obs) const;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<ScriptedPursuit>(*this); }
  std::string name() const override { return "scripted"; }

  double cruise_speed = 4.0;     // m/s
  double bearing_gain = 1.0;     // commanded deg/s per deg of bearing
  double caution_range = 35.0;   // m; forward clearance that triggers slowing
  double forward_cone = 30.0;    // deg either side of the bow

 private:
  SensorConfig sensor_;
  VesselParams nominal_;
};

}  // namespace portnav
