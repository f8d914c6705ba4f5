#include "qtraj/config.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "qtraj/errors.hpp"
#include "qtraj/io.hpp"

namespace qtraj {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw ConfigError(key, "config key '" + key + "': expected a number, got '" + value + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& value) {
  Int v{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw ConfigError(key, "config key '" + key + "': expected an integer, got '" + value + "'");
  }
  return v;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto t = std::string(trim(item));
    if (!t.empty()) out.push_back(parse_int<int>(key, t));
  }
  return out;
}

}  // namespace

const std::vector<std::string_view>& known_config_keys() {
  static const std::vector<std::string_view> keys = {
      "scenario",   "kbar",        "xi",          "D",           "epsilon",        "x0",
      "p0",         "sigma_x",     "sigma_p",     "grid_size",   "steps_per_period", "n_periods",
      "n_traj",     "seed",        "dump_strobes", "n_bins",     "pair_budget",    "checkpoint_every",
      "label",      "portrait_nx", "portrait_np", "portrait_pmax"};
  return keys;
}

ConfigEntries parse_config(std::string_view text) {
  ConfigEntries out;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("", "config line " + std::to_string(line_no) + ": empty key");
    if (!seen.insert(key).second) throw ConfigError(key, "config key '" + key + "' given twice");
    out.emplace_back(std::move(key), std::move(value));
    if (end == text.size()) break;
  }
  return out;
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::portrait:
      return "portrait";
    case ScenarioKind::quantum_ensemble:
      return "quantum_ensemble";
    case ScenarioKind::classical_ensemble:
      return "classical_ensemble";
    case ScenarioKind::angles:
      return "angles";
    case ScenarioKind::wigner:
      return "wigner";
  }
  return "unknown";
}

ScenarioKind scenario_kind_from_string(std::string_view name) {
  for (auto k : {ScenarioKind::portrait, ScenarioKind::quantum_ensemble, ScenarioKind::classical_ensemble,
                 ScenarioKind::angles, ScenarioKind::wigner}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("scenario", "unknown scenario '" + std::string(name) + "'");
}

double ScenarioSpec::effective_sigma_p() const {
  return sigma_p.value_or(params.kbar * params.kbar / (4.0 * sigma_x));
}

bool ScenarioSpec::dumps_at(int strobe) const {
  if (dump_strobes.empty()) return strobe == params.n_periods;
  return std::find(dump_strobes.begin(), dump_strobes.end(), strobe) != dump_strobes.end();
}

void ScenarioSpec::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const std::string key = what.substr(0, what.find(' '));
    throw ConfigError(key, "config key '" + key + "': " + what);
  }
  const auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError(key, "config key '" + key + "': " + why);
  };
  if (n_traj < 1) fail("n_traj", "must be >= 1");
  if (kind == ScenarioKind::angles && n_traj < 2) fail("n_traj", "angle statistics need at least 2 trajectories");
  if (!(sigma_x > 0.0)) fail("sigma_x", "must be positive");
  if (sigma_p && *sigma_p < 0.0) fail("sigma_p", "must be non-negative");
  if (!(std::abs(x0) <= 3.141592653589793)) fail("x0", "must lie in [-pi, pi]");
  if (n_bins < 1) fail("n_bins", "must be >= 1");
  if (pair_budget && *pair_budget < 1) fail("pair_budget", "must be >= 1");
  if (checkpoint_every < 1) fail("checkpoint_every", "must be >= 1");
  if (portrait_nx < 1 || portrait_np < 1) fail("portrait_nx", "seed grid must be non-empty");
  for (int s : dump_strobes) {
    if (s < 0 || s > params.n_periods) fail("dump_strobes", "strobe " + std::to_string(s) + " outside run");
  }
}

ScenarioSpec scenario_from_entries(const ConfigEntries& entries) {
  const auto& keys = known_config_keys();
  ScenarioSpec spec;
  bool have_scenario = false;
  std::set<std::string, std::less<>> given;
  for (const auto& [key, value] : entries) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(key, "unknown config key '" + key + "'");
    }
    given.insert(key);
    if (key == "scenario") {
      spec.kind = scenario_kind_from_string(value);
      have_scenario = true;
    } else if (key == "kbar") {
      spec.params.kbar = parse_double(key, value);
    } else if (key == "xi") {
      spec.params.xi = parse_double(key, value);
    } else if (key == "D") {
      spec.params.D = parse_double(key, value);
    } else if (key == "epsilon") {
      spec.params.epsilon = parse_double(key, value);
    } else if (key == "x0") {
      spec.x0 = parse_double(key, value);
    } else if (key == "p0") {
      spec.p0 = parse_double(key, value);
    } else if (key == "sigma_x") {
      spec.sigma_x = parse_double(key, value);
    } else if (key == "sigma_p") {
      spec.sigma_p = parse_double(key, value);
    } else if (key == "grid_size") {
      spec.params.grid_size = parse_int<int>(key, value);
    } else if (key == "steps_per_period") {
      spec.params.steps_per_period = parse_int<int>(key, value);
    } else if (key == "n_periods") {
      spec.params.n_periods = parse_int<int>(key, value);
    } else if (key == "n_traj") {
      spec.n_traj = parse_int<int>(key, value);
    } else if (key == "seed") {
      spec.params.seed = parse_int<std::uint64_t>(key, value);
    } else if (key == "dump_strobes") {
      spec.dump_strobes = parse_int_list(key, value);
    } else if (key == "n_bins") {
      spec.n_bins = parse_int<int>(key, value);
    } else if (key == "pair_budget") {
      spec.pair_budget = parse_int<long>(key, value);
    } else if (key == "checkpoint_every") {
      spec.checkpoint_every = parse_int<int>(key, value);
    } else if (key == "label") {
      spec.label = value;
    } else if (key == "portrait_nx") {
      spec.portrait_nx = parse_int<int>(key, value);
    } else if (key == "portrait_np") {
      spec.portrait_np = parse_int<int>(key, value);
    } else if (key == "portrait_pmax") {
      spec.portrait_pmax = parse_double(key, value);
    }
  }
  if (!have_scenario) throw ConfigError("scenario", "config key 'scenario' is required");
  if (spec.kind != ScenarioKind::portrait) {
    for (const char* required : {"x0", "p0"}) {
      if (!given.contains(required)) {
        throw ConfigError(required, std::string("config key '") + required + "' is required for scenario " +
                                        std::string(to_string(spec.kind)));
      }
    }
  }
  spec.validate();
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file_text(path);
  } catch (const std::exception& e) {
    throw ConfigError("", e.what());
  }
  return scenario_from_entries(parse_config(text));
}

std::string ScenarioSpec::to_config_text() const {
  std::ostringstream os;
  os << "scenario = " << to_string(kind) << '\n';
  os << "kbar = " << format_double(params.kbar) << '\n';
  os << "xi = " << format_double(params.xi) << '\n';
  os << "D = " << format_double(params.D) << '\n';
  os << "epsilon = " << format_double(params.epsilon) << '\n';
  os << "x0 = " << format_double(x0) << '\n';
  os << "p0 = " << format_double(p0) << '\n';
  os << "sigma_x = " << format_double(sigma_x) << '\n';
  if (sigma_p) os << "sigma_p = " << format_double(*sigma_p) << '\n';
  os << "grid_size = " << params.grid_size << '\n';
  os << "steps_per_period = " << params.steps_per_period << '\n';
  os << "n_periods = " << params.n_periods << '\n';
  os << "n_traj = " << n_traj << '\n';
  os << "seed = " << params.seed << '\n';
  if (!dump_strobes.empty()) {
    os << "dump_strobes = ";
    for (std::size_t i = 0; i < dump_strobes.size(); ++i) os << (i ? "," : "") << dump_strobes[i];
    os << '\n';
  }
  os << "n_bins = " << n_bins << '\n';
  if (pair_budget) os << "pair_budget = " << *pair_budget << '\n';
  os << "checkpoint_every = " << checkpoint_every << '\n';
  if (!label.empty()) os << "label = " << label << '\n';
  os << "portrait_nx = " << portrait_nx << '\n';
  os << "portrait_np = " << portrait_np << '\n';
  os << "portrait_pmax = " << format_double(portrait_pmax) << '\n';
  return os.str();
}

}  // namespace qtraj
