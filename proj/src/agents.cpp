#include "portnav/agents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "portnav/errors.hpp"

namespace portnav {

using nn::Matrix;
using nn::Vector;

const char* to_string(AgentKind k) {
  switch (k) {
    case AgentKind::Sac: return "sac";
    case AgentKind::Baseline: return "baseline";
    default: return "scripted";
  }
}

AgentKind agent_kind_from_string(const std::string& s) {
  if (s == "sac") return AgentKind::Sac;
  if (s == "baseline") return AgentKind::Baseline;
  if (s == "scripted") return AgentKind::Scripted;
  throw InvalidConfig("unknown agent type '" + s + "' (expected sac, baseline or scripted)");
}

void validate(const AgentConfig& c) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw InvalidConfig(std::string("agent: ") + msg);
  };
  require(!c.hidden.empty(), "hidden must list at least one layer");
  for (int h : c.hidden) require(h >= 1, "hidden sizes must be >= 1");
  require(c.lr > 0.0 && std::isfinite(c.lr), "lr must be > 0");
  require(c.tau > 0.0 && c.tau < 1.0, "tau must be in (0, 1)");
  require(c.batch_size >= 1, "batch_size must be >= 1");
  require(c.buffer_capacity >= 1, "buffer_capacity must be >= 1");
  require(c.gamma > 0.0 && c.gamma < 1.0, "gamma must be in (0, 1)");
  require(c.init_alpha > 0.0 && std::isfinite(c.init_alpha), "init_alpha must be > 0");
  require(c.log_std_min < c.log_std_max, "log_std_min must be < log_std_max");
  require(c.exploration_noise >= 0.0, "exploration_noise must be >= 0");
  require(c.target_noise >= 0.0 && c.target_noise_clip >= 0.0, "target noise must be >= 0");
  require(c.policy_delay >= 1, "policy_delay must be >= 1");
  require(c.warmup_steps >= 0, "warmup_steps must be >= 0");
  require(c.updates_per_step >= 0.0, "updates_per_step must be >= 0");
}

ControlInput to_control(const Action& a, const VesselParams& params) {
  return {std::clamp(a[0], -1.0, 1.0) * params.thrust_max, std::clamp(a[1], -1.0, 1.0)};
}

namespace {

std::vector<int> layer_sizes(std::size_t in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{static_cast<int>(in)};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

Matrix column(std::span<const double> obs, std::size_t expected) {
  if (obs.size() != expected) {
    throw InvalidState("policy: observation has " + std::to_string(obs.size()) + " entries, expected " +
                       std::to_string(expected));
  }
  for (double v : obs) {
    if (!std::isfinite(v)) throw InvalidState("policy: observation contains a non-finite value");
  }
  return Eigen::Map<const Matrix>(obs.data(), static_cast<Eigen::Index>(obs.size()), 1);
}

Matrix standard_normal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = n(rng);
  return m;
}

double softplus(double x) { return std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0); }

// Gradient of a scalar Adam parameter, packed as a one-element block.
void adam_scalar(double& param, double grad, nn::AdamState& state) {
  const nn::ParamBlock p{&param, 1};
  const nn::ConstParamBlock g{&grad, 1};
  nn::adam_update(std::span<const nn::ParamBlock>(&p, 1), std::span<const nn::ConstParamBlock>(&g, 1), state);
}

void check_batch(const Batch& b, std::size_t obs_dim) {
  if (b.obs.rows() != static_cast<Eigen::Index>(obs_dim) || b.next_obs.rows() != b.obs.rows() ||
      b.action.rows() != kActionDim || b.obs.cols() != b.action.cols() || b.obs.cols() != b.reward.size() ||
      b.obs.cols() != b.done.size() || b.obs.cols() != b.next_obs.cols() || b.obs.cols() == 0) {
    throw InvalidState("agent: malformed batch");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

SquashedGaussian::Sample SquashedGaussian::sample(const Matrix& out, const Matrix& noise) const {
  Sample s;
  s.mean = out.topRows(kActionDim);
  const Matrix raw = out.bottomRows(kActionDim);
  s.log_std = (lo_ + 0.5 * (hi_ - lo_) * (raw.array().tanh() + 1.0)).matrix();
  s.pre_tanh = (s.mean.array() + s.log_std.array().exp() * noise.array()).matrix();
  s.action = s.pre_tanh.array().tanh().matrix();
  s.log_prob.resize(out.cols());
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    double lp = 0.0;
    for (Eigen::Index i = 0; i < kActionDim; ++i) {
      const double u = s.pre_tanh(i, j);
      // log(1 - tanh(u)^2) in a form that stays finite for large |u|.
      const double log_jacobian = 2.0 * (std::numbers::ln2 - u - softplus(-2.0 * u));
      lp += -0.5 * noise(i, j) * noise(i, j) - half_log_2pi - s.log_std(i, j) - log_jacobian;
    }
    s.log_prob[j] = lp;
  }
  return s;
}

Matrix SquashedGaussian::backprop(const Matrix& out, const Matrix& noise, const Sample& s, const Matrix& d_action,
                                  const Vector& d_log_prob) const {
  const Eigen::Index b = out.cols();
  Matrix d_out(2 * kActionDim, b);
  const Matrix raw = out.bottomRows(kActionDim);
  for (Eigen::Index j = 0; j < b; ++j) {
    for (Eigen::Index i = 0; i < kActionDim; ++i) {
      const double a = s.action(i, j);
      // d log_prob / d u = 2 tanh(u) with the noise held fixed.
      const double d_u = d_action(i, j) * (1.0 - a * a) + d_log_prob[j] * 2.0 * a;
      const double d_log_std = d_u * std::exp(s.log_std(i, j)) * noise(i, j) - d_log_prob[j];
      const double t = std::tanh(raw(i, j));
      d_out(i, j) = d_u;
      d_out(kActionDim + i, j) = d_log_std * 0.5 * (hi_ - lo_) * (1.0 - t * t);
    }
  }
  return d_out;
}

Action SacPolicy::act(std::span<const double> obs, ActMode mode, std::mt19937_64& rng) const {
  const Matrix out = actor_.forward(column(obs, static_cast<std::size_t>(actor_.input_size())));
  if (mode == ActMode::Deterministic) return {std::tanh(out(0, 0)), std::tanh(out(1, 0))};
  const auto s = head_.sample(out, standard_normal(kActionDim, 1, rng));
  return {s.action(0, 0), s.action(1, 0)};
}

SacAgent::SacAgent(const AgentConfig& cfg, std::size_t obs_dim, std::uint64_t seed)
    : cfg_(cfg), obs_dim_(obs_dim), head_(cfg.log_std_min, cfg.log_std_max), log_alpha_(std::log(cfg.init_alpha)) {
  validate(cfg_);
  std::mt19937_64 rng(seed);
  actor_ = nn::Mlp(layer_sizes(obs_dim, cfg_.hidden, 2 * kActionDim), rng);
  q1_ = nn::Mlp(layer_sizes(obs_dim + kActionDim, cfg_.hidden, 1), rng);
  q2_ = nn::Mlp(layer_sizes(obs_dim + kActionDim, cfg_.hidden, 1), rng);
  q1_target_ = q1_;
  q2_target_ = q2_;
  const nn::AdamOptions opts{cfg_.lr};
  actor_opt_ = nn::AdamState(opts, actor_);
  q1_opt_ = nn::AdamState(opts, q1_);
  q2_opt_ = nn::AdamState(opts, q2_);
  const double one = 0.0;
  const nn::ConstParamBlock shape{&one, 1};
  alpha_opt_ = nn::AdamState(opts, std::span<const nn::ConstParamBlock>(&shape, 1));
}

double SacAgent::alpha() const { return std::exp(log_alpha_); }

Matrix SacAgent::critic_input(const Matrix& obs, const Matrix& action) const {
  Matrix in(obs.rows() + kActionDim, obs.cols());
  in.topRows(obs.rows()) = obs;
  in.bottomRows(kActionDim) = action;
  return in;
}

Action SacAgent::act(std::span<const double> obs, ActMode mode, std::mt19937_64& rng) const {
  return SacPolicy(actor_, head_).act(obs, mode, rng);
}

std::unique_ptr<Policy> SacAgent::snapshot() const { return std::make_unique<SacPolicy>(actor_, head_); }

double SacAgent::critic_loss(const Batch& batch, const Matrix& next_noise, nn::MlpGradients* q1_grad,
                             nn::MlpGradients* q2_grad) const {
  check_batch(batch, obs_dim_);
  const Eigen::Index n = batch.size();
  const double alpha = this->alpha();

  const auto next = head_.sample(actor_.forward(batch.next_obs), next_noise);
  const Matrix next_in = critic_input(batch.next_obs, next.action);
  const Matrix qt = q1_target_.forward(next_in).cwiseMin(q2_target_.forward(next_in));
  Vector target(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    target[j] = batch.reward[j] + cfg_.gamma * (1.0 - batch.done[j]) * (qt(0, j) - alpha * next.log_prob[j]);
  }

  const Matrix in = critic_input(batch.obs, batch.action);
  double loss = 0.0;
  auto one_critic = [&](const nn::Mlp& q, nn::MlpGradients* grad) {
    nn::Mlp::Tape tape;
    const Matrix pred = q.forward(in, tape);
    const Matrix diff = pred - target.transpose();
    loss += 0.5 * diff.squaredNorm() / static_cast<double>(n);
    if (grad != nullptr) q.backward(tape, diff / static_cast<double>(n), *grad);
  };
  one_critic(q1_, q1_grad);
  one_critic(q2_, q2_grad);
  return loss;
}

SacAgent::ActorLoss SacAgent::actor_loss(const Batch& batch, const Matrix& noise, nn::MlpGradients* actor_grad) const {
  check_batch(batch, obs_dim_);
  const Eigen::Index n = batch.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double alpha = this->alpha();

  nn::Mlp::Tape actor_tape;
  const Matrix out = actor_.forward(batch.obs, actor_tape);
  const auto s = head_.sample(out, noise);
  const Matrix in = critic_input(batch.obs, s.action);
  nn::Mlp::Tape t1;
  nn::Mlp::Tape t2;
  const Matrix v1 = q1_.forward(in, t1);
  const Matrix v2 = q2_.forward(in, t2);

  ActorLoss res;
  Matrix d1 = Matrix::Zero(1, n);
  Matrix d2 = Matrix::Zero(1, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const bool first = v1(0, j) <= v2(0, j);
    const double q = first ? v1(0, j) : v2(0, j);
    res.loss += alpha * s.log_prob[j] - q;
    res.mean_log_prob += s.log_prob[j];
    (first ? d1 : d2)(0, j) = -inv_n;
  }
  res.loss *= inv_n;
  res.mean_log_prob *= inv_n;
  if (actor_grad == nullptr) return res;

  // Critic parameter gradients are discarded; only the action path matters.
  nn::MlpGradients scratch1 = q1_.zero_gradients();
  nn::MlpGradients scratch2 = q2_.zero_gradients();
  const Matrix g_in = q1_.backward(t1, d1, scratch1) + q2_.backward(t2, d2, scratch2);
  const Matrix d_action = g_in.bottomRows(kActionDim);
  const Vector d_log_prob = Vector::Constant(n, alpha * inv_n);
  actor_.backward(actor_tape, head_.backprop(out, noise, s, d_action, d_log_prob), *actor_grad);
  return res;
}

UpdateReport SacAgent::update(const Batch& batch, std::mt19937_64& rng) {
  check_batch(batch, obs_dim_);
  const SacAgent backup = *this;
  auto fail = [&](const char* what) {
    *this = backup;
    throw InvalidState(std::string("sac update: non-finite ") + what + "; parameters rolled back");
  };
  UpdateReport rep;

  nn::MlpGradients g1 = q1_.zero_gradients();
  nn::MlpGradients g2 = q2_.zero_gradients();
  rep.critic_loss = critic_loss(batch, standard_normal(kActionDim, batch.size(), rng), &g1, &g2);
  if (!std::isfinite(rep.critic_loss)) fail("critic loss");
  nn::adam_update(q1_, g1, q1_opt_);
  nn::adam_update(q2_, g2, q2_opt_);

  nn::MlpGradients ga = actor_.zero_gradients();
  const ActorLoss al = actor_loss(batch, standard_normal(kActionDim, batch.size(), rng), &ga);
  if (!std::isfinite(al.loss)) fail("actor loss");
  nn::adam_update(actor_, ga, actor_opt_);
  rep.actor_loss = al.loss;
  rep.actor_updated = true;
  rep.entropy = -al.mean_log_prob;

  if (cfg_.auto_alpha) {
    // loss = -log_alpha * (log_pi + target_entropy)
    adam_scalar(log_alpha_, -(al.mean_log_prob + cfg_.target_entropy), alpha_opt_);
  }
  rep.alpha = alpha();

  q1_target_.polyak_from(q1_, cfg_.tau);
  q2_target_.polyak_from(q2_, cfg_.tau);
  if (!actor_.all_finite() || !q1_.all_finite() || !q2_.all_finite() || !std::isfinite(log_alpha_)) {
    fail("parameters");
  }
  return rep;
}

void SacAgent::save(TensorArchive& out) const {
  out.put_mlp("actor", actor_);
  out.put_mlp("q1", q1_);
  out.put_mlp("q2", q2_);
  out.put_mlp("q1_target", q1_target_);
  out.put_mlp("q2_target", q2_target_);
  out.put_adam("opt/actor", actor_opt_);
  out.put_adam("opt/q1", q1_opt_);
  out.put_adam("opt/q2", q2_opt_);
  out.put_adam("opt/alpha", alpha_opt_);
  out.put_scalar("log_alpha", log_alpha_);
}

void SacAgent::load(const TensorArchive& in) {
  in.get_mlp("actor", actor_);
  in.get_mlp("q1", q1_);
  in.get_mlp("q2", q2_);
  in.get_mlp("q1_target", q1_target_);
  in.get_mlp("q2_target", q2_target_);
  in.get_adam("opt/actor", actor_opt_);
  in.get_adam("opt/q1", q1_opt_);
  in.get_adam("opt/q2", q2_opt_);
  in.get_adam("opt/alpha", alpha_opt_);
  log_alpha_ = in.get_scalar("log_alpha");
}

// ---------------------------------------------------------------------------

Action DeterministicPolicy::act(std::span<const double> obs, ActMode mode, std::mt19937_64& rng) const {
  const Matrix out = actor_.forward(column(obs, static_cast<std::size_t>(actor_.input_size())));
  Action a{std::tanh(out(0, 0)), std::tanh(out(1, 0))};
  if (mode == ActMode::Stochastic && noise_std_ > 0.0) {
    std::normal_distribution<double> n(0.0, noise_std_);
    for (double& v : a) v = std::clamp(v + n(rng), -1.0, 1.0);
  }
  return a;
}

BaselineAgent::BaselineAgent(const AgentConfig& cfg, std::size_t obs_dim, std::uint64_t seed)
    : cfg_(cfg), obs_dim_(obs_dim) {
  validate(cfg_);
  std::mt19937_64 rng(seed);
  actor_ = nn::Mlp(layer_sizes(obs_dim, cfg_.hidden, kActionDim), rng);
  q1_ = nn::Mlp(layer_sizes(obs_dim + kActionDim, cfg_.hidden, 1), rng);
  q2_ = nn::Mlp(layer_sizes(obs_dim + kActionDim, cfg_.hidden, 1), rng);
  actor_target_ = actor_;
  q1_target_ = q1_;
  q2_target_ = q2_;
  const nn::AdamOptions opts{cfg_.lr};
  actor_opt_ = nn::AdamState(opts, actor_);
  q1_opt_ = nn::AdamState(opts, q1_);
  q2_opt_ = nn::AdamState(opts, q2_);
}

Matrix BaselineAgent::critic_input(const Matrix& obs, const Matrix& action) const {
  Matrix in(obs.rows() + kActionDim, obs.cols());
  in.topRows(obs.rows()) = obs;
  in.bottomRows(kActionDim) = action;
  return in;
}

Action BaselineAgent::act(std::span<const double> obs, ActMode mode, std::mt19937_64& rng) const {
  return DeterministicPolicy(actor_, cfg_.exploration_noise).act(obs, mode, rng);
}

std::unique_ptr<Policy> BaselineAgent::snapshot() const {
  return std::make_unique<DeterministicPolicy>(actor_, cfg_.exploration_noise);
}

double BaselineAgent::critic_loss(const Batch& batch, const Matrix& target_noise, nn::MlpGradients* q1_grad,
                                  nn::MlpGradients* q2_grad) const {
  check_batch(batch, obs_dim_);
  const Eigen::Index n = batch.size();
  Matrix next_action = actor_target_.forward(batch.next_obs).array().tanh().matrix();
  for (Eigen::Index k = 0; k < next_action.size(); ++k) {
    const double eps = std::clamp(cfg_.target_noise * target_noise.data()[k], -cfg_.target_noise_clip,
                                  cfg_.target_noise_clip);
    next_action.data()[k] = std::clamp(next_action.data()[k] + eps, -1.0, 1.0);
  }
  const Matrix next_in = critic_input(batch.next_obs, next_action);
  const Matrix qt = q1_target_.forward(next_in).cwiseMin(q2_target_.forward(next_in));
  Vector target(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    target[j] = batch.reward[j] + cfg_.gamma * (1.0 - batch.done[j]) * qt(0, j);
  }
  const Matrix in = critic_input(batch.obs, batch.action);
  double loss = 0.0;
  auto one_critic = [&](const nn::Mlp& q, nn::MlpGradients* grad) {
    nn::Mlp::Tape tape;
    const Matrix diff = q.forward(in, tape) - target.transpose();
    loss += 0.5 * diff.squaredNorm() / static_cast<double>(n);
    if (grad != nullptr) q.backward(tape, diff / static_cast<double>(n), *grad);
  };
  one_critic(q1_, q1_grad);
  one_critic(q2_, q2_grad);
  return loss;
}

double BaselineAgent::actor_loss(const Batch& batch, nn::MlpGradients* actor_grad) const {
  check_batch(batch, obs_dim_);
  const Eigen::Index n = batch.size();
  nn::Mlp::Tape actor_tape;
  const Matrix out = actor_.forward(batch.obs, actor_tape);
  const Matrix action = out.array().tanh().matrix();
  nn::Mlp::Tape qt;
  const Matrix q = q1_.forward(critic_input(batch.obs, action), qt);
  const double loss = -q.sum() / static_cast<double>(n);
  if (actor_grad == nullptr) return loss;
  nn::MlpGradients scratch = q1_.zero_gradients();
  const Matrix g_in = q1_.backward(qt, Matrix::Constant(1, n, -1.0 / static_cast<double>(n)), scratch);
  const Matrix d_out = (g_in.bottomRows(kActionDim).array() * (1.0 - action.array().square())).matrix();
  actor_.backward(actor_tape, d_out, *actor_grad);
  return loss;
}

UpdateReport BaselineAgent::update(const Batch& batch, std::mt19937_64& rng) {
  check_batch(batch, obs_dim_);
  const BaselineAgent backup = *this;
  auto fail = [&](const char* what) {
    *this = backup;
    throw InvalidState(std::string("baseline update: non-finite ") + what + "; parameters rolled back");
  };
  UpdateReport rep;
  nn::MlpGradients g1 = q1_.zero_gradients();
  nn::MlpGradients g2 = q2_.zero_gradients();
  rep.critic_loss = critic_loss(batch, standard_normal(kActionDim, batch.size(), rng), &g1, &g2);
  if (!std::isfinite(rep.critic_loss)) fail("critic loss");
  nn::adam_update(q1_, g1, q1_opt_);
  nn::adam_update(q2_, g2, q2_opt_);
  ++updates_;

  if (updates_ % cfg_.policy_delay == 0) {
    nn::MlpGradients ga = actor_.zero_gradients();
    rep.actor_loss = actor_loss(batch, &ga);
    if (!std::isfinite(rep.actor_loss)) fail("actor loss");
    nn::adam_update(actor_, ga, actor_opt_);
    rep.actor_updated = true;
    actor_target_.polyak_from(actor_, cfg_.tau);
    q1_target_.polyak_from(q1_, cfg_.tau);
    q2_target_.polyak_from(q2_, cfg_.tau);
  }
  if (!actor_.all_finite() || !q1_.all_finite() || !q2_.all_finite()) fail("parameters");
  return rep;
}

void BaselineAgent::save(TensorArchive& out) const {
  out.put_mlp("actor", actor_);
  out.put_mlp("q1", q1_);
  out.put_mlp("q2", q2_);
  out.put_mlp("actor_target", actor_target_);
  out.put_mlp("q1_target", q1_target_);
  out.put_mlp("q2_target", q2_target_);
  out.put_adam("opt/actor", actor_opt_);
  out.put_adam("opt/q1", q1_opt_);
  out.put_adam("opt/q2", q2_opt_);
  out.put_scalar("updates", static_cast<double>(updates_));
}

void BaselineAgent::load(const TensorArchive& in) {
  in.get_mlp("actor", actor_);
  in.get_mlp("q1", q1_);
  in.get_mlp("q2", q2_);
  in.get_mlp("actor_target", actor_target_);
  in.get_mlp("q1_target", q1_target_);
  in.get_mlp("q2_target", q2_target_);
  in.get_adam("opt/actor", actor_opt_);
  in.get_adam("opt/q1", q1_opt_);
  in.get_adam("opt/q2", q2_opt_);
  updates_ = static_cast<long>(in.get_scalar("updates"));
}

std::unique_ptr<Agent> make_agent(const AgentConfig& cfg, std::size_t obs_dim, std::uint64_t seed) {
  switch (cfg.kind) {
    case AgentKind::Sac: return std::make_unique<SacAgent>(cfg, obs_dim, seed);
    case AgentKind::Baseline: return std::make_unique<BaselineAgent>(cfg, obs_dim, seed);
    default: throw InvalidConfig("agent: the scripted controller does not learn");
  }
}

// ---------------------------------------------------------------------------

ScriptedPursuit::ScriptedPursuit(const SensorConfig& sensor, const VesselParams& nominal)
    : sensor_(sensor), nominal_(nominal) {
  validate(sensor_);
  validate(nominal_);
}

Action ScriptedPursuit::act(std::span<const double> obs, ActMode, std::mt19937_64&) const { return act(obs); }

Action ScriptedPursuit::act(std::span<const double> obs) const {
  const auto n = static_cast<std::size_t>(sensor_.n_rays);
  if (obs.size() != n + 4) throw InvalidState("scripted pursuit: observation has the wrong length");
  const double bearing = obs[n + 1] * 180.0;
  const double speed = obs[n + 2] * nominal_.speed_max;
  const double rate = obs[n + 3] * nominal_.angular_rate_max;

  double forward = sensor_.max_range;
  double port_open = 0.0;
  double starboard_open = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double off = ray_offset(sensor_, static_cast<int>(i));
    const double r = obs[i] * sensor_.max_range;
    if (std::abs(off) <= forward_cone) forward = std::min(forward, r);
    if (off < -20.0 && off > -100.0) port_open += r;
    if (off > 20.0 && off < 100.0) starboard_open += r;
  }

  double rate_cmd = bearing_gain * bearing;
  double speed_cmd = std::abs(bearing) > 45.0 ? 0.5 * cruise_speed : cruise_speed;
  if (forward < caution_range) {
    rate_cmd = (starboard_open >= port_open ? 1.0 : -1.0) * 2.0 * nominal_.angular_rate_max;
    speed_cmd = std::min(speed_cmd, std::max(0.5, cruise_speed * (forward - 10.0) / caution_range));
  }
  // One-tick deadbeat tracking of the commanded turn rate and speed.
  const double rudder = (rate_cmd - rate) / (nominal_.turn_rate * nominal_.dt);
  const double thrust = (speed_cmd - speed) * nominal_.mass / nominal_.dt / nominal_.thrust_max;
  return {std::clamp(thrust, -1.0, 1.0), std::clamp(rudder, -1.0, 1.0)};
}

}  // namespace portnav
