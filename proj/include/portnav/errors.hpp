#pragma once

#include <stdexcept>
#include <string>

namespace portnav {

/// Non-finite or out-of-domain numeric state handed to the simulator.
class InvalidState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameter block that violates its invariants (mass <= 0, empty grid, ...).
class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// API called out of order, e.g. stepping a finished episode.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Rejection sampling could not place an entity within its attempt budget.
class GenerationFailure : public std::runtime_error {
 public:
  GenerationFailure(std::string entity, const std::string& what)
      : std::runtime_error(what), entity_(std::move(entity)) {}
  const std::string& entity() const noexcept { return entity_; }

 private:
  std::string entity_;
};

/// Artifact (checkpoint, log, scene) produced under an incompatible configuration.
class ConfigMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace portnav
