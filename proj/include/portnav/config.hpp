#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "portnav/agents.hpp"
#include "portnav/env.hpp"
#include "portnav/trainer.hpp"

namespace portnav {

/// Everything a run needs, one section per module:
///   [vessel] [world] [sensor] [env] [agent] [trainer] [eval]
struct RunConfig {
  EnvConfig env;
  AgentConfig agent;
  TrainerConfig trainer;
  EvalConfig eval;
};

/// Environment variable that overrides trainer.out.
inline constexpr const char* kOutDirEnv = "PORTNAV_OUT_DIR";

/// Resolution order, lowest first: built-in defaults, the INI file, the
/// PORTNAV_OUT_DIR variable, then `overrides` of the form "section.key=value".
/// Unknown sections or keys are rejected.
RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides = {}, bool read_env = true);

/// Same, from INI text (used for configs embedded in checkpoints).
RunConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides = {});

/// Canonical INI text of every key, sections and keys in fixed order.
std::string to_ini(const RunConfig& cfg);

/// 16-hex-digit FNV-1a hash of the canonical text of the sections that shape
/// the simulation and the learner ([vessel] [world] [sensor] [env] [agent]).
/// [trainer] and [eval] only steer a run and are excluded.
std::string config_hash(const RunConfig& cfg);

void validate(const RunConfig& cfg);

/// Loads an EnvConfig from an INI file; convenience for embedding the
/// environment in other programs.
EnvConfig load_env_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace portnav
