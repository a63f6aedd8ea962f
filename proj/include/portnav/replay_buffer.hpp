#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "portnav/nn.hpp"

namespace portnav {

inline constexpr int kActionDim = 2;
/// Normalised action: [thrust / thrust_max, rudder], both in [-1, 1].
using Action = std::array<double, kActionDim>;

struct Transition {
  std::vector<double> obs;
  Action action{};
  double reward = 0.0;
  std::vector<double> next_obs;
  bool done = false;  // true only for terminal (goal/collision) steps, not time limits
};

/// Column-major minibatch; column j is one transition.
struct Batch {
  nn::Matrix obs;       // obs_dim x B
  nn::Matrix action;    // 2 x B
  nn::Vector reward;    // B
  nn::Matrix next_obs;  // obs_dim x B
  nn::Vector done;      // B, 0 or 1

  Eigen::Index size() const { return obs.cols(); }
};

/// Fixed-capacity ring buffer. Storage grows on demand up to capacity.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t obs_dim);

  void add(const Transition& t);
  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t obs_dim() const noexcept { return obs_dim_; }
  std::uint64_t insertions() const noexcept { return insertions_; }

  /// `n` indices drawn uniformly with replacement from the stored items.
  Batch sample(std::size_t n, std::mt19937_64& rng) const;
  Batch gather(std::span<const std::size_t> indices) const;

 private:
  std::size_t capacity_;
  std::size_t obs_dim_;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  std::uint64_t insertions_ = 0;
  std::vector<double> obs_;
  std::vector<double> next_obs_;
  std::vector<double> action_;
  std::vector<double> reward_;
  std::vector<double> done_;
};

}  // namespace portnav
