#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qtraj {

/// Bad or unknown configuration. `key()` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Non-finite values or conservation failures detected mid-run.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, long trajectory = -1, long step = -1)
      : std::runtime_error(what), trajectory_(trajectory), step_(step) {}
  long trajectory() const noexcept { return trajectory_; }
  long step() const noexcept { return step_; }

 private:
  long trajectory_;
  long step_;
};

/// Checkpoint or dump whose checksum or header does not match.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qtraj
