#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qtraj/params.hpp"

namespace qtraj {

/// Ordered key/value pairs from a flat `key = value` text file. '#' starts a comment.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Throws ConfigError on malformed lines or duplicate keys.
ConfigEntries parse_config(std::string_view text);

enum class ScenarioKind { portrait, quantum_ensemble, classical_ensemble, angles, wigner };

std::string_view to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(std::string_view name);  // throws ConfigError

/// One runnable experiment: model constants, initial condition and outputs.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::quantum_ensemble;
  SimParams params;
  double x0 = 0.0;
  double p0 = 1.0;
  double sigma_x = 0.3906;
  std::optional<double> sigma_p;  // defaults to the minimum-uncertainty kbar^2 / (4 sigma_x)
  int n_traj = 1;
  std::vector<int> dump_strobes;  // defaults to {n_periods}
  int n_bins = 50;
  std::optional<long> pair_budget;
  int checkpoint_every = 10;
  std::string label;
  int portrait_nx = 12;
  int portrait_np = 9;
  double portrait_pmax = 2.5;

  double effective_sigma_p() const;
  bool dumps_at(int strobe) const;
  /// Throws ConfigError naming the offending key.
  void validate() const;
  /// Canonical config text; parsing it yields an identical spec.
  std::string to_config_text() const;
};

/// Builds and validates a spec. Unknown keys are rejected.
ScenarioSpec scenario_from_entries(const ConfigEntries& entries);
ScenarioSpec load_scenario(const std::filesystem::path& path);

/// Keys accepted in scenario files.
const std::vector<std::string_view>& known_config_keys();

}  // namespace qtraj
