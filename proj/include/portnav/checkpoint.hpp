#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "portnav/nn.hpp"

namespace portnav {

/// Named tensors and scalars making up an agent's full state.
class TensorArchive {
 public:
  void put(const std::string& name, nn::Matrix value);
  void put_scalar(const std::string& name, double value);
  const nn::Matrix& get(const std::string& name) const;
  double get_scalar(const std::string& name) const;
  bool contains(const std::string& name) const { return tensors_.contains(name) || scalars_.contains(name); }

  const std::map<std::string, nn::Matrix>& tensors() const noexcept { return tensors_; }
  const std::map<std::string, double>& scalars() const noexcept { return scalars_; }

  void put_mlp(const std::string& prefix, const nn::Mlp& net);
  /// Overwrites `net` in place; shapes must match the stored tensors.
  void get_mlp(const std::string& prefix, nn::Mlp& net) const;
  void put_adam(const std::string& prefix, const nn::AdamState& state);
  void get_adam(const std::string& prefix, nn::AdamState& state) const;

 private:
  std::map<std::string, nn::Matrix> tensors_;
  std::map<std::string, double> scalars_;
};

// Checkpoint container (little-endian):
//   bytes 0..7    magic "PNCKPT01"
//   bytes 8..15   uint64 header length H
//   next H bytes  UTF-8 JSON header:
//                 {"format":"portnav-checkpoint","version":1,"agent":..,
//                  "config_hash":..,"config":<resolved config text>,
//                  "env_steps":..,"rng":<engine state>,"scalars":{..},
//                  "tensors":[{"name":..,"rows":..,"cols":..,"offset":..},..]}
//   remainder     float64 payload, column-major per tensor, offsets in doubles
inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  std::string agent;  // "sac" | "baseline"
  std::string config_hash;
  std::string config_text;
  std::uint64_t env_steps = 0;
  std::string rng_state;
  TensorArchive archive;
};

/// Writes to a temporary sibling and renames, so readers never observe a
/// half-written file.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace portnav
