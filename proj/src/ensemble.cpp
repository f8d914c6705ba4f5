#include "qtraj/ensemble.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "qtraj/classical.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/io.hpp"
#include "qtraj/noise.hpp"
#include "qtraj/parallel.hpp"
#include "qtraj/propagator.hpp"
#include "qtraj/stats.hpp"
#include "qtraj/wigner.hpp"

namespace qtraj {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kCheckpointMagic = 0x31544b43525451ULL;  // "QTRCKT1"
constexpr const char* kCheckpointFile = "checkpoint.bin";
constexpr const char* kConfigFile = "config.txt";
constexpr const char* kManifestFile = "manifest.json";

struct TrajectoryScalars {
  double mean_p = 0.0;
  double mean_p2 = 0.0;
  double mean_j = 0.0;
  double mean_j2 = 0.0;
  double norm_drift = 0.0;
};

struct QuantumTrajectory {
  WaveFunction psi;
  NoiseStream noise;
  std::vector<TrajectoryScalars> record;
};

struct ClassicalTrajectory {
  ClassicalState state;
  NoiseStream noise;
};

struct ThetaRow {
  int strobe = 0;
  AngleAverage average;
};

struct ClassicalRow {
  double t = 0.0;
  double mean_p = 0.0;
  double var_p = 0.0;
  double mean_x = 0.0;
  double var_x = 0.0;
};

std::string padded(int value, int width) {
  std::string s = std::to_string(value);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

std::string state_dump_name(std::size_t traj, int strobe) {
  return "states/traj_" + padded(static_cast<int>(traj), 5) + "_strobe_" + padded(strobe, 4) + ".bin";
}

std::string histogram_name(int strobe) { return "histogram_strobe_" + padded(strobe, 4) + ".csv"; }

bool is_quantum(ScenarioKind k) {
  return k == ScenarioKind::quantum_ensemble || k == ScenarioKind::angles || k == ScenarioKind::wigner;
}

json::binary_t pack_doubles(const std::vector<double>& v) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(8 * v.size());
  for (double d : v) put_f64(bytes, d);
  return json::binary_t(std::move(bytes));
}

std::vector<double> unpack_doubles(const json& j) {
  const auto& bytes = j.get_binary();
  if (bytes.size() % 8 != 0) throw IntegrityError("checkpoint array has a partial value");
  std::vector<double> out(bytes.size() / 8);
  const std::span<const std::uint8_t> view(bytes.data(), bytes.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = get_f64(view, 8 * i);
  return out;
}

class EnsembleRun {
 public:
  EnsembleRun(ScenarioSpec spec, fs::path dir, RunOptions options)
      : spec_(std::move(spec)), dir_(std::move(dir)), options_(options), config_text_(spec_.to_config_text()) {
    grid_ = make_grid(static_cast<std::size_t>(spec_.params.grid_size), spec_.params.kbar);
  }

  void start_fresh();
  void load_checkpoint();
  RunSummary execute();

 private:
  SimParams portrait_params() const {
    SimParams p = spec_.params;
    p.D = 0.0;
    return p;
  }
  std::size_t n_items() const {
    return spec_.kind == ScenarioKind::portrait ? portrait_seeds_.size() : static_cast<std::size_t>(spec_.n_traj);
  }

  void record_strobe(int strobe, const std::vector<SplitStepPropagator>& props);
  void advance_strobe(int strobe, std::vector<SplitStepPropagator>& props);
  void write_checkpoint() const;
  void write_outputs();
  void write_manifest() const;
  RunSummary summary(bool completed, double seconds) const;

  ScenarioSpec spec_;
  fs::path dir_;
  RunOptions options_;
  std::string config_text_;
  GridPtr grid_;
  int strobe_ = 0;

  std::vector<QuantumTrajectory> quantum_;
  std::vector<ClassicalTrajectory> classical_;
  std::vector<PhaseSpacePoint> portrait_seeds_;
  std::vector<std::vector<PhaseSpacePoint>> portrait_points_;  // per seed, per strobe
  std::vector<ClassicalRow> classical_rows_;
  std::vector<ThetaRow> theta_;
  std::map<int, Histogram> histograms_;
  std::set<std::string> files_;
};

void EnsembleRun::start_fresh() {
  const auto n = static_cast<std::size_t>(spec_.n_traj);
  const std::uint64_t seed = spec_.params.seed;
  strobe_ = 0;
  if (is_quantum(spec_.kind)) {
    WaveFunction initial;
    try {
      initial = gaussian_state(grid_, spec_.x0, spec_.p0, spec_.sigma_x);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("sigma_x", std::string("config key 'sigma_x': ") + e.what());
    }
    quantum_.clear();
    quantum_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) quantum_.push_back({initial, NoiseStream(seed, i), {}});
  } else if (spec_.kind == ScenarioKind::classical_ensemble) {
    const auto q = QInitParams::from_quantum(spec_.x0, spec_.p0, spec_.sigma_x, spec_.effective_sigma_p(),
                                             spec_.params.kbar, spec_.params.xi);
    classical_.clear();
    classical_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      NoiseStream noise(seed, i);
      const auto sample = sample_q_initial(q, 1, noise).front();
      classical_.push_back({sample, std::move(noise)});
    }
  } else {
    // seed grid over x in [-pi, pi) and p in [-pmax, pmax]
    portrait_seeds_.clear();
    for (int ix = 0; ix < spec_.portrait_nx; ++ix) {
      for (int ip = 0; ip < spec_.portrait_np; ++ip) {
        const double x = -std::numbers::pi + kTwoPi * (ix + 0.5) / spec_.portrait_nx;
        const double p = spec_.portrait_np == 1 ? 0.0
                                                : -spec_.portrait_pmax + 2.0 * spec_.portrait_pmax * ip /
                                                                             (spec_.portrait_np - 1);
        portrait_seeds_.push_back({x, p});
      }
    }
    classical_.clear();
    for (std::size_t i = 0; i < portrait_seeds_.size(); ++i) {
      classical_.push_back({ClassicalState{portrait_seeds_[i].x, portrait_seeds_[i].p, 0.0}, NoiseStream(seed, i)});
    }
    portrait_points_.assign(portrait_seeds_.size(), {});
  }
  std::vector<SplitStepPropagator> props;
  if (is_quantum(spec_.kind)) props.emplace_back(grid_, spec_.params);
  record_strobe(0, props);
}

void EnsembleRun::record_strobe(int strobe, const std::vector<SplitStepPropagator>& props) {
  const bool dump = spec_.dumps_at(strobe);
  if (is_quantum(spec_.kind)) {
    // scalars are recorded inside advance_strobe for strobes > 0
    if (strobe == 0) {
      const Fft& fft = props.front().fft();
      for (auto& tr : quantum_) {
        const auto pm = momentum_moments(tr.psi, fft);
        const auto jm = measurement_moments(tr.psi);
        tr.record.push_back({pm.mean, pm.mean_sq, jm.mean, jm.mean_sq, std::abs(tr.psi.norm_squared() - 1.0)});
      }
    }
    if (spec_.kind == ScenarioKind::angles) {
      std::vector<WaveFunction> states;
      states.reserve(quantum_.size());
      for (const auto& tr : quantum_) states.push_back(tr.psi);
      const std::optional<std::size_t> budget =
          spec_.pair_budget ? std::optional<std::size_t>(static_cast<std::size_t>(*spec_.pair_budget)) : std::nullopt;
      const std::size_t total = states.size() * (states.size() - 1) / 2;
      if (budget && *budget < total) {
        theta_.push_back({strobe, average_angle(states, budget, substream_seed(spec_.params.seed, 1u << 31) + strobe,
                                                options_.workers)});
        if (dump) {
          // histograms always use every pair
          histograms_[strobe] = angle_histogram(angle_matrix(states, options_.workers),
                                                static_cast<std::size_t>(spec_.n_bins));
        }
      } else {
        const AngleMatrix m = angle_matrix(states, options_.workers);
        theta_.push_back({strobe, average_angle(m)});
        if (dump) histograms_[strobe] = angle_histogram(m, static_cast<std::size_t>(spec_.n_bins));
      }
    }
    if (dump && spec_.kind != ScenarioKind::wigner) {
      for (std::size_t i = 0; i < quantum_.size(); ++i) {
        const auto name = state_dump_name(i, strobe);
        write_file_atomic(dir_ / name, encode_state(quantum_[i].psi));
        files_.insert(name);
      }
    }
    if (dump && spec_.kind == ScenarioKind::wigner) {
      for (std::size_t i = 0; i < quantum_.size(); ++i) {
        const WignerGrid w = wigner_transform(quantum_[i].psi);
        const std::string stem = "wigner_traj_" + padded(static_cast<int>(i), 5) + "_strobe_" + padded(strobe, 4);
        CsvWriter csv({"x", "p", "P"});
        for (std::size_t ix = 0; ix < w.nx; ++ix) {
          for (std::size_t ip = 0; ip < w.np; ++ip) {
            csv.cell(w.x[ix]).cell(w.p[ip]).cell(w(ix, ip));
            csv.end_row();
          }
        }
        write_file_atomic(dir_ / (stem + ".csv"), csv.str());
        write_file_atomic(dir_ / (stem + ".bin"), encode_wigner(w, grid_->kbar(), quantum_[i].psi.time));
        files_.insert(stem + ".csv");
        files_.insert(stem + ".bin");
      }
    }
  } else if (spec_.kind == ScenarioKind::classical_ensemble) {
    std::vector<double> ps(classical_.size());
    std::vector<double> xs(classical_.size());
    for (std::size_t i = 0; i < classical_.size(); ++i) {
      ps[i] = classical_[i].state.p;
      xs[i] = classical_[i].state.x;
    }
    const MomentRow pm = sample_moments(ps);
    const MomentRow xm = sample_moments(xs);
    classical_rows_.push_back({kTwoPi * strobe, pm.mean_p, pm.var_of_means, xm.mean_p, xm.var_of_means});
  } else {
    for (std::size_t i = 0; i < classical_.size(); ++i) {
      portrait_points_[i].push_back({classical_[i].state.wrapped_x(), classical_[i].state.p});
    }
  }
}

void EnsembleRun::advance_strobe(int strobe, std::vector<SplitStepPropagator>& props) {
  const int spp = spec_.params.steps_per_period;
  const double dt = spec_.params.dt();
  const double t_end = kTwoPi * strobe;
  if (is_quantum(spec_.kind)) {
    parallel_for(quantum_.size(), options_.workers, [&](std::size_t i, int worker) {
      auto& tr = quantum_[i];
      auto& prop = props[static_cast<std::size_t>(worker)];
      try {
        prop.advance(tr.psi, spp, dt, tr.noise);
      } catch (const NumericError& e) {
        const long step = static_cast<long>(strobe - 1) * spp + e.step();
        throw NumericError("trajectory " + std::to_string(i) + " became non-finite at step " + std::to_string(step),
                           static_cast<long>(i), step);
      }
      tr.psi.time = t_end;
      const auto pm = momentum_moments(tr.psi, prop.fft());
      const auto jm = measurement_moments(tr.psi);
      tr.record.push_back({pm.mean, pm.mean_sq, jm.mean, jm.mean_sq, std::abs(tr.psi.norm_squared() - 1.0)});
    });
  } else {
    const SimParams params = spec_.kind == ScenarioKind::portrait ? portrait_params() : spec_.params;
    parallel_for(classical_.size(), options_.workers, [&](std::size_t i, int) {
      auto& tr = classical_[i];
      for (int s = 0; s < spp; ++s) {
        sde_step(tr.state, spec_.kind == ScenarioKind::portrait ? WienerStep{0.0, dt} : tr.noise.wiener(dt), params);
        if (!std::isfinite(tr.state.x) || !std::isfinite(tr.state.p)) {
          const long step = static_cast<long>(strobe - 1) * spp + s;
          throw NumericError("trajectory " + std::to_string(i) + " became non-finite at step " + std::to_string(step),
                             static_cast<long>(i), step);
        }
      }
      tr.state.time = t_end;
    });
  }
  record_strobe(strobe, props);
}

void EnsembleRun::write_checkpoint() const {
  json doc;
  doc["config"] = config_text_;
  doc["strobe"] = strobe_;
  json q = json::array();
  for (const auto& tr : quantum_) {
    std::vector<double> amps;
    amps.reserve(2 * tr.psi.size());
    for (const auto& a : tr.psi.amps) {
      amps.push_back(a.real());
      amps.push_back(a.imag());
    }
    std::vector<double> rec;
    for (const auto& r : tr.record) rec.insert(rec.end(), {r.mean_p, r.mean_p2, r.mean_j, r.mean_j2, r.norm_drift});
    q.push_back({{"amps", pack_doubles(amps)}, {"time", tr.psi.time}, {"noise", tr.noise.save()},
                 {"record", pack_doubles(rec)}});
  }
  doc["quantum"] = std::move(q);
  json c = json::array();
  for (const auto& tr : classical_) {
    c.push_back({{"x", tr.state.x}, {"p", tr.state.p}, {"time", tr.state.time}, {"noise", tr.noise.save()}});
  }
  doc["classical"] = std::move(c);
  std::vector<double> rows;
  for (const auto& r : classical_rows_) rows.insert(rows.end(), {r.t, r.mean_p, r.var_p, r.mean_x, r.var_x});
  doc["classical_rows"] = pack_doubles(rows);
  json portrait = json::array();
  for (const auto& pts : portrait_points_) {
    std::vector<double> flat;
    for (const auto& pt : pts) flat.insert(flat.end(), {pt.x, pt.p});
    portrait.push_back(pack_doubles(flat));
  }
  doc["portrait"] = std::move(portrait);
  json seeds = json::array();
  for (const auto& s : portrait_seeds_) seeds.push_back({s.x, s.p});
  doc["portrait_seeds"] = std::move(seeds);
  json theta = json::array();
  for (const auto& row : theta_) {
    theta.push_back({row.strobe, row.average.mean, row.average.std_error, row.average.n_pairs});
  }
  doc["theta"] = std::move(theta);
  json hist = json::array();
  for (const auto& [s, h] : histograms_) hist.push_back({{"strobe", s}, {"counts", h.counts}});
  doc["histograms"] = std::move(hist);
  doc["files"] = files_;

  const std::vector<std::uint8_t> payload = json::to_cbor(doc);
  std::vector<std::uint8_t> bytes;
  bytes.reserve(payload.size() + 24);
  put_u64(bytes, kCheckpointMagic);
  put_u64(bytes, crc32_of(payload));
  put_u64(bytes, payload.size());
  bytes.insert(bytes.end(), payload.begin(), payload.end());
  write_file_atomic(dir_ / kCheckpointFile, bytes);
}

void EnsembleRun::load_checkpoint() {
  const auto bytes = read_file_bytes(dir_ / kCheckpointFile);
  const std::span<const std::uint8_t> view(bytes);
  if (bytes.size() < 24 || get_u64(view, 0) != kCheckpointMagic) throw IntegrityError("checkpoint header is invalid");
  const std::uint64_t crc = get_u64(view, 8);
  const std::uint64_t length = get_u64(view, 16);
  if (length != bytes.size() - 24) throw IntegrityError("checkpoint length mismatch");
  const auto payload = view.subspan(24);
  if (crc32_of(payload) != crc) throw IntegrityError("checkpoint checksum mismatch");
  const json doc = json::from_cbor(payload.begin(), payload.end());
  if (doc.at("config").get<std::string>() != config_text_) {
    throw IntegrityError("checkpoint was written for a different configuration");
  }
  strobe_ = doc.at("strobe").get<int>();

  quantum_.clear();
  const std::uint64_t seed = spec_.params.seed;
  std::size_t index = 0;
  for (const auto& q : doc.at("quantum")) {
    const auto amps = unpack_doubles(q.at("amps"));
    if (amps.size() != 2 * grid_->size()) throw IntegrityError("checkpoint state has the wrong size");
    WaveFunction psi(grid_, q.at("time").get<double>());
    for (std::size_t j = 0; j < grid_->size(); ++j) psi.amps[j] = {amps[2 * j], amps[2 * j + 1]};
    NoiseStream noise(seed, index);
    noise.restore(q.at("noise").get<std::string>());
    const auto rec = unpack_doubles(q.at("record"));
    std::vector<TrajectoryScalars> record;
    for (std::size_t r = 0; r + 4 < rec.size(); r += 5) {
      record.push_back({rec[r], rec[r + 1], rec[r + 2], rec[r + 3], rec[r + 4]});
    }
    quantum_.push_back({std::move(psi), std::move(noise), std::move(record)});
    ++index;
  }
  classical_.clear();
  index = 0;
  for (const auto& c : doc.at("classical")) {
    NoiseStream noise(seed, index);
    noise.restore(c.at("noise").get<std::string>());
    classical_.push_back(
        {ClassicalState{c.at("x").get<double>(), c.at("p").get<double>(), c.at("time").get<double>()},
         std::move(noise)});
    ++index;
  }
  const auto rows = unpack_doubles(doc.at("classical_rows"));
  classical_rows_.clear();
  for (std::size_t r = 0; r + 4 < rows.size(); r += 5) {
    classical_rows_.push_back({rows[r], rows[r + 1], rows[r + 2], rows[r + 3], rows[r + 4]});
  }
  portrait_points_.clear();
  for (const auto& pts : doc.at("portrait")) {
    const auto flat = unpack_doubles(pts);
    std::vector<PhaseSpacePoint> v;
    for (std::size_t r = 0; r + 1 < flat.size(); r += 2) v.push_back({flat[r], flat[r + 1]});
    portrait_points_.push_back(std::move(v));
  }
  portrait_seeds_.clear();
  for (const auto& s : doc.at("portrait_seeds")) portrait_seeds_.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
  theta_.clear();
  for (const auto& row : doc.at("theta")) {
    theta_.push_back({row.at(0).get<int>(),
                      {row.at(1).get<double>(), row.at(2).get<double>(), row.at(3).get<std::size_t>()}});
  }
  histograms_.clear();
  for (const auto& h : doc.at("histograms")) {
    Histogram hist{0.0, std::numbers::pi / 2.0, h.at("counts").get<std::vector<std::size_t>>()};
    histograms_[h.at("strobe").get<int>()] = std::move(hist);
  }
  files_ = doc.at("files").get<std::set<std::string>>();
  const std::size_t expected = n_items();
  const std::size_t have = is_quantum(spec_.kind) ? quantum_.size() : classical_.size();
  if (have != expected) throw IntegrityError("checkpoint trajectory count does not match configuration");
}

void EnsembleRun::write_outputs() {
  if (is_quantum(spec_.kind)) {
    CsvWriter traj({"traj", "strobe", "mean_p", "mean_p2", "mean_j", "mean_j2", "norm_drift"});
    std::vector<std::vector<ConditionalMoments>> series(quantum_.size());
    for (std::size_t i = 0; i < quantum_.size(); ++i) {
      for (std::size_t s = 0; s < quantum_[i].record.size(); ++s) {
        const auto& r = quantum_[i].record[s];
        traj.cell(static_cast<std::uint64_t>(i)).cell(static_cast<std::uint64_t>(s));
        traj.cell(r.mean_p).cell(r.mean_p2).cell(r.mean_j).cell(r.mean_j2).cell(r.norm_drift);
        traj.end_row();
        series[i].push_back({r.mean_p, r.mean_p2});
      }
    }
    write_file_atomic(dir_ / "trajectories.csv", traj.str());
    files_.insert("trajectories.csv");

    const auto rows = ensemble_moments(series);
    CsvWriter moments({"strobe", "mean_p", "var_of_means", "mean_cond_var", "pooled_var", "stderr_mean"});
    for (std::size_t s = 0; s < rows.size(); ++s) {
      moments.cell(static_cast<std::uint64_t>(s)).cell(rows[s].mean_p).cell(rows[s].var_of_means);
      moments.cell(rows[s].mean_cond_var).cell(rows[s].pooled_var).cell(rows[s].stderr_mean);
      moments.end_row();
    }
    write_file_atomic(dir_ / "quantum_moments.csv", moments.str());
    files_.insert("quantum_moments.csv");
  }
  if (spec_.kind == ScenarioKind::angles) {
    CsvWriter theta({"strobe", "theta_ave", "stderr", "n_pairs"});
    for (const auto& row : theta_) {
      theta.cell(row.strobe).cell(row.average.mean).cell(row.average.std_error);
      theta.cell(static_cast<std::uint64_t>(row.average.n_pairs));
      theta.end_row();
    }
    write_file_atomic(dir_ / "theta_ave.csv", theta.str());
    files_.insert("theta_ave.csv");
    for (const auto& [s, h] : histograms_) {
      CsvWriter csv({"bin_lo", "bin_hi", "count"});
      for (std::size_t b = 0; b < h.counts.size(); ++b) {
        csv.cell(h.bin_lo(b)).cell(h.bin_hi(b)).cell(static_cast<std::uint64_t>(h.counts[b]));
        csv.end_row();
      }
      write_file_atomic(dir_ / histogram_name(s), csv.str());
      files_.insert(histogram_name(s));
    }
  }
  if (spec_.kind == ScenarioKind::classical_ensemble) {
    CsvWriter csv({"t", "mean_p", "var_p", "mean_x", "var_x"});
    for (const auto& r : classical_rows_) {
      csv.cell(r.t).cell(r.mean_p).cell(r.var_p).cell(r.mean_x).cell(r.var_x);
      csv.end_row();
    }
    write_file_atomic(dir_ / "classical_moments.csv", csv.str());
    files_.insert("classical_moments.csv");
  }
  if (spec_.kind == ScenarioKind::portrait) {
    CsvWriter csv({"strobe_index", "seed_index", "x", "p"});
    for (std::size_t i = 0; i < portrait_points_.size(); ++i) {
      for (std::size_t s = 0; s < portrait_points_[i].size(); ++s) {
        csv.cell(static_cast<std::uint64_t>(s)).cell(static_cast<std::uint64_t>(i));
        csv.cell(portrait_points_[i][s].x).cell(portrait_points_[i][s].p);
        csv.end_row();
      }
    }
    write_file_atomic(dir_ / "portrait.csv", csv.str());
    files_.insert("portrait.csv");
  }
}

void EnsembleRun::write_manifest() const {
  json doc;
  doc["run_id"] = run_id_for(spec_);
  doc["scenario"] = std::string(to_string(spec_.kind));
  doc["label"] = spec_.label;
  doc["completed"] = true;
  doc["n_periods"] = spec_.params.n_periods;
  json files = json::array();
  std::set<std::string> all = files_;
  all.insert(kConfigFile);
  for (const auto& name : all) {
    const auto bytes = read_file_bytes(dir_ / name);
    files.push_back({{"name", name}, {"bytes", bytes.size()}, {"crc32", crc32_of(bytes)}});
  }
  doc["files"] = std::move(files);
  write_file_atomic(dir_ / kManifestFile, doc.dump(2) + "\n");
}

RunSummary EnsembleRun::summary(bool completed, double seconds) const {
  RunSummary s;
  s.run_id = run_id_for(spec_);
  s.run_dir = dir_;
  s.wall_seconds = seconds;
  s.completed = completed;
  s.strobe = strobe_;
  s.files.assign(files_.begin(), files_.end());
  if (completed) {
    s.files.push_back(kConfigFile);
    s.files.push_back(kManifestFile);
    std::sort(s.files.begin(), s.files.end());
  }
  return s;
}

RunSummary EnsembleRun::execute() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SplitStepPropagator> props;
  if (is_quantum(spec_.kind)) {
    for (int w = 0; w < std::max(1, options_.workers); ++w) props.emplace_back(grid_, spec_.params);
  }
  const int n_periods = spec_.params.n_periods;
  while (strobe_ < n_periods) {
    if (options_.halt_after_strobe && strobe_ >= *options_.halt_after_strobe) {
      write_checkpoint();
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return summary(false, secs);
    }
    advance_strobe(strobe_ + 1, props);
    ++strobe_;
    if (strobe_ < n_periods && strobe_ % spec_.checkpoint_every == 0) write_checkpoint();
  }
  write_outputs();
  write_manifest();
  std::error_code ec;
  fs::remove(dir_ / kCheckpointFile, ec);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary(true, secs);
}

}  // namespace

std::string RunSummary::to_json_line() const {
  json doc;
  doc["run_id"] = run_id;
  doc["run_dir"] = run_dir.string();
  doc["completed"] = completed;
  doc["strobe"] = strobe;
  doc["wall_time_s"] = wall_seconds;
  doc["files"] = files;
  return doc.dump();
}

std::string run_id_for(const ScenarioSpec& spec) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%08x", crc32_of(spec.to_config_text()));
  return std::string(to_string(spec.kind)) + "-" + buf;
}

RunSummary run_scenario(const ScenarioSpec& spec, const fs::path& run_dir, const RunOptions& options) {
  spec.validate();
  fs::create_directories(run_dir);
  std::error_code ec;
  fs::remove(run_dir / kManifestFile, ec);
  fs::remove(run_dir / kCheckpointFile, ec);
  write_file_atomic(run_dir / kConfigFile, spec.to_config_text());
  EnsembleRun run(spec, run_dir, options);
  run.start_fresh();
  return run.execute();
}

RunSummary resume(const fs::path& run_dir, const RunOptions& options) {
  if (!fs::exists(run_dir / kConfigFile)) {
    throw ConfigError("run_dir", "no " + std::string(kConfigFile) + " in " + run_dir.string());
  }
  const ScenarioSpec spec = load_scenario(run_dir / kConfigFile);
  if (fs::exists(run_dir / kManifestFile)) {
    const json manifest = json::parse(read_file_text(run_dir / kManifestFile));
    if (manifest.value("completed", false)) {
      RunSummary s;
      s.run_id = manifest.at("run_id").get<std::string>();
      s.run_dir = run_dir;
      s.completed = true;
      s.strobe = spec.params.n_periods;
      for (const auto& f : manifest.at("files")) s.files.push_back(f.at("name").get<std::string>());
      s.files.push_back(kManifestFile);
      std::sort(s.files.begin(), s.files.end());
      return s;
    }
  }
  EnsembleRun run(spec, run_dir, options);
  if (fs::exists(run_dir / kCheckpointFile)) {
    run.load_checkpoint();
  } else {
    run.start_fresh();
  }
  return run.execute();
}

Figure figure_from_string(std::string_view name) {
  if (name == "fig2") return Figure::fig2;
  if (name == "fig3") return Figure::fig3;
  if (name == "fig4") return Figure::fig4;
  if (name == "fig5") return Figure::fig5;
  if (name == "fig6") return Figure::fig6;
  throw ConfigError("figure", "unknown figure '" + std::string(name) + "' (expected fig2..fig6)");
}

namespace {

fs::path find_input(const fs::path& run_dir, const std::vector<fs::path>& companions, const std::string& name) {
  if (fs::exists(run_dir / name)) return run_dir / name;
  for (const auto& c : companions) {
    if (fs::exists(c / name)) return c / name;
  }
  throw ConfigError(name, "missing input " + name + " in " + run_dir.string() +
                              (companions.empty() ? std::string() : " or its companion runs"));
}

std::string series_label(const fs::path& dir) {
  if (fs::exists(dir / kManifestFile)) {
    const json manifest = json::parse(read_file_text(dir / kManifestFile));
    const auto label = manifest.value("label", std::string());
    if (!label.empty()) return label;
  }
  auto name = fs::absolute(dir).lexically_normal().filename().string();
  if (name.empty()) name = fs::absolute(dir).lexically_normal().parent_path().filename().string();
  return name;
}

}  // namespace

fs::path emit_plot_data(const fs::path& run_dir, Figure figure, const std::vector<fs::path>& companions,
                        std::optional<int> strobe) {
  CsvWriter* out = nullptr;
  std::optional<CsvWriter> writer;
  std::string name;
  switch (figure) {
    case Figure::fig2:
    case Figure::fig3: {
      name = figure == Figure::fig2 ? "fig2" : "fig3";
      const CsvTable quantum = read_csv(find_input(run_dir, companions, "quantum_moments.csv"));
      const CsvTable classical = read_csv(find_input(run_dir, companions, "classical_moments.csv"));
      writer.emplace(std::initializer_list<std::string_view>{
          "strobe", "quantum_mean_p", "quantum_var_of_means", "quantum_mean_cond_var", "quantum_pooled_var",
          "classical_mean_p", "classical_var_p"});
      out = &*writer;
      const std::size_t rows = std::min(quantum.rows.size(), classical.rows.size());
      for (std::size_t r = 0; r < rows; ++r) {
        out->cell(static_cast<std::int64_t>(std::llround(quantum.number(r, "strobe"))));
        out->cell(quantum.number(r, "mean_p")).cell(quantum.number(r, "var_of_means"));
        out->cell(quantum.number(r, "mean_cond_var")).cell(quantum.number(r, "pooled_var"));
        out->cell(classical.number(r, "mean_p")).cell(classical.number(r, "var_p"));
        out->end_row();
      }
      break;
    }
    case Figure::fig4: {
      name = "fig4";
      std::vector<fs::path> dirs{run_dir};
      dirs.insert(dirs.end(), companions.begin(), companions.end());
      std::vector<CsvTable> tables;
      std::vector<std::string> header{"strobe"};
      for (const auto& d : dirs) {
        if (!fs::exists(d / "theta_ave.csv")) {
          throw ConfigError("theta_ave.csv", "missing input theta_ave.csv in " + d.string());
        }
        tables.push_back(read_csv(d / "theta_ave.csv"));
        const auto label = series_label(d);
        header.push_back("theta_ave_" + label);
        header.push_back("stderr_" + label);
      }
      writer.emplace(header);
      out = &*writer;
      std::size_t rows = tables.front().rows.size();
      for (const auto& t : tables) rows = std::min(rows, t.rows.size());
      for (std::size_t r = 0; r < rows; ++r) {
        out->cell(static_cast<std::int64_t>(std::llround(tables.front().number(r, "strobe"))));
        for (const auto& t : tables) out->cell(t.number(r, "theta_ave")).cell(t.number(r, "stderr"));
        out->end_row();
      }
      break;
    }
    case Figure::fig5:
    case Figure::fig6: {
      name = figure == Figure::fig5 ? "fig5" : "fig6";
      int chosen = -1;
      if (strobe) {
        chosen = *strobe;
      } else {
        for (const auto& entry : fs::directory_iterator(run_dir)) {
          const auto fname = entry.path().filename().string();
          if (fname.starts_with("histogram_strobe_") && fname.ends_with(".csv")) {
            chosen = std::max(chosen, std::stoi(fname.substr(17, fname.size() - 21)));
          }
        }
        if (chosen < 0) throw ConfigError("histogram", "missing input histogram_strobe_*.csv in " + run_dir.string());
      }
      const CsvTable hist = read_csv(find_input(run_dir, {}, histogram_name(chosen)));
      double total = 0.0;
      for (std::size_t r = 0; r < hist.rows.size(); ++r) total += hist.number(r, "count");
      writer.emplace(std::initializer_list<std::string_view>{"bin_lo", "bin_hi", "bin_center", "count", "density"});
      out = &*writer;
      for (std::size_t r = 0; r < hist.rows.size(); ++r) {
        const double lo = hist.number(r, "bin_lo");
        const double hi = hist.number(r, "bin_hi");
        const double count = hist.number(r, "count");
        out->cell(lo).cell(hi).cell(0.5 * (lo + hi)).cell(static_cast<std::uint64_t>(count));
        out->cell(total > 0.0 ? count / (total * (hi - lo)) : 0.0);
        out->end_row();
      }
      break;
    }
  }
  const fs::path path = run_dir / "figures" / (name + ".csv");
  write_file_atomic(path, out->str());
  return path;
}

}  // namespace qtraj
