#include "portnav/replay_buffer.hpp"

#include <algorithm>
#include <string>

#include "portnav/errors.hpp"

namespace portnav {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t obs_dim) : capacity_(capacity), obs_dim_(obs_dim) {
  if (capacity == 0) throw InvalidConfig("replay buffer: capacity must be >= 1");
  if (obs_dim == 0) throw InvalidConfig("replay buffer: obs_dim must be >= 1");
}

void ReplayBuffer::add(const Transition& t) {
  if (t.obs.size() != obs_dim_ || t.next_obs.size() != obs_dim_) {
    throw InvalidState("replay buffer: observation has " + std::to_string(t.obs.size()) + " entries, expected " +
                       std::to_string(obs_dim_));
  }
  if (size_ < capacity_ && next_ == size_) {
    obs_.insert(obs_.end(), t.obs.begin(), t.obs.end());
    next_obs_.insert(next_obs_.end(), t.next_obs.begin(), t.next_obs.end());
    action_.insert(action_.end(), t.action.begin(), t.action.end());
    reward_.push_back(t.reward);
    done_.push_back(t.done ? 1.0 : 0.0);
    ++size_;
  } else {
    std::copy(t.obs.begin(), t.obs.end(), obs_.begin() + static_cast<std::ptrdiff_t>(next_ * obs_dim_));
    std::copy(t.next_obs.begin(), t.next_obs.end(), next_obs_.begin() + static_cast<std::ptrdiff_t>(next_ * obs_dim_));
    std::copy(t.action.begin(), t.action.end(), action_.begin() + static_cast<std::ptrdiff_t>(next_ * kActionDim));
    reward_[next_] = t.reward;
    done_[next_] = t.done ? 1.0 : 0.0;
  }
  next_ = (next_ + 1) % capacity_;
  ++insertions_;
}

Batch ReplayBuffer::sample(std::size_t n, std::mt19937_64& rng) const {
  if (size_ == 0) throw UsageError("replay buffer: cannot sample from an empty buffer");
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<std::size_t> idx(n);
  for (std::size_t& i : idx) i = pick(rng);
  return gather(idx);
}

Batch ReplayBuffer::gather(std::span<const std::size_t> indices) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  const auto d = static_cast<Eigen::Index>(obs_dim_);
  Batch b{nn::Matrix(d, n), nn::Matrix(kActionDim, n), nn::Vector(n), nn::Matrix(d, n), nn::Vector(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::size_t i = indices[static_cast<std::size_t>(j)];
    if (i >= size_) throw InvalidState("replay buffer: index out of range");
    std::copy_n(obs_.begin() + static_cast<std::ptrdiff_t>(i * obs_dim_), obs_dim_, b.obs.col(j).data());
    std::copy_n(next_obs_.begin() + static_cast<std::ptrdiff_t>(i * obs_dim_), obs_dim_, b.next_obs.col(j).data());
    b.action(0, j) = action_[i * kActionDim];
    b.action(1, j) = action_[i * kActionDim + 1];
    b.reward[j] = reward_[i];
    b.done[j] = done_[i];
  }
  return b;
}

}  // namespace portnav
