// Command-line driver: simulate, resume and emit figure tables.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qtraj/ensemble.hpp"
#include "qtraj/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIntegrity = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional quantum and classical trajectories of a measured, driven pendulum"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string out_dir;
  std::optional<int> halt_after;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario file");
  simulate->add_option("config", config_path, "Scenario file (key = value lines)")->required();
  simulate->add_option("--seed", seed, "Override the master seed");
  simulate->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_dir, "Run directory (default runs/<run id>)");
  simulate->add_option("--halt-after-strobe", halt_after, "Checkpoint and stop once this strobe is reached");

  std::string run_dir;
  auto* resume_cmd = app.add_subcommand("resume", "Continue an interrupted run");
  resume_cmd->add_option("run_dir", run_dir, "Run directory")->required();
  resume_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  std::string figure;
  std::vector<std::string> companions;
  std::optional<int> strobe;
  auto* emit = app.add_subcommand("emit", "Write the data table for one figure");
  emit->add_option("run_dir", run_dir, "Run directory")->required();
  emit->add_option("--figure", figure, "fig2 .. fig6")->required();
  emit->add_option("--with", companions, "Additional run directories");
  emit->add_option("--strobe", strobe, "Histogram strobe (fig5/fig6)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      qtraj::ScenarioSpec spec = qtraj::load_scenario(config_path);
      if (seed) {
        spec.params.seed = *seed;
        spec.validate();
      }
      const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path("runs") / qtraj::run_id_for(spec)
                                                        : std::filesystem::path(out_dir);
      const auto summary = qtraj::run_scenario(spec, dir, {workers, halt_after});
      std::cout << summary.to_json_line() << '\n';
    } else if (resume_cmd->parsed()) {
      const auto summary = qtraj::resume(run_dir, {workers, std::nullopt});
      std::cout << summary.to_json_line() << '\n';
    } else if (emit->parsed()) {
      std::vector<std::filesystem::path> with(companions.begin(), companions.end());
      const auto path = qtraj::emit_plot_data(run_dir, qtraj::figure_from_string(figure), with, strobe);
      std::cout << "{\"figure\":\"" << figure << "\",\"path\":\"" << path.string() << "\"}\n";
    }
  } catch (const qtraj::ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qtraj::NumericError& e) {
    std::cerr << "numeric error (trajectory " << e.trajectory() << ", step " << e.step() << "): " << e.what()
              << '\n';
    return kExitNumeric;
  } catch (const qtraj::IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return kExitIntegrity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
