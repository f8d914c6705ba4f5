#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qtraj/config.hpp"

namespace qtraj {

struct RunOptions {
  int workers = 1;
  /// Stop (after checkpointing) once this strobe is reached; simulates an interruption.
  std::optional<int> halt_after_strobe;
};

struct RunSummary {
  std::string run_id;
  std::filesystem::path run_dir;
  double wall_seconds = 0.0;
  bool completed = false;
  int strobe = 0;
  std::vector<std::string> files;  // relative to run_dir, sorted

  /// One-line JSON object for stdout.
  std::string to_json_line() const;
};

/// Deterministic id derived from the canonical config text.
std::string run_id_for(const ScenarioSpec& spec);

/// Runs the scenario into run_dir (created if needed). Outputs depend only on
/// the spec, never on the worker count.
///
/// Throws ConfigError, NumericError (with trajectory id and step) or IntegrityError.
RunSummary run_scenario(const ScenarioSpec& spec, const std::filesystem::path& run_dir, const RunOptions& options = {});

/// Continues an interrupted run from its checkpoint; a completed run is a no-op.
RunSummary resume(const std::filesystem::path& run_dir, const RunOptions& options = {});

enum class Figure { fig2, fig3, fig4, fig5, fig6 };

Figure figure_from_string(std::string_view name);  // throws ConfigError

/// Writes figures/<fig>.csv under run_dir with the columns needed to redraw the figure.
///
/// fig2/fig3 pair quantum and classical moments, fig4 places the theta_ave
/// series of run_dir and each companion side by side, fig5/fig6 copy an angle
/// histogram (strobe defaults to the last one written). Missing inputs are named
/// in the thrown ConfigError.
std::filesystem::path emit_plot_data(const std::filesystem::path& run_dir, Figure figure,
                                     const std::vector<std::filesystem::path>& companions = {},
                                     std::optional<int> strobe = {});

}  // namespace qtraj
