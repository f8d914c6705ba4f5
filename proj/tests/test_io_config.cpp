#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "qtraj/config.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/io.hpp"

using namespace qtraj;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qtraj_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kMinimal =
    "scenario = quantum_ensemble\n"
    "kbar = 0.25\n"
    "xi = 1.2\n"
    "D = 0.001\n"
    "epsilon = 0.2\n"
    "x0 = 0\n"
    "p0 = 1.0\n"
    "sigma_x = 0.3906\n"
    "grid_size = 256\n"
    "steps_per_period = 200\n"
    "n_periods = 200\n"
    "n_traj = 100\n"
    "seed = 7\n";

std::string expect_config_error(const std::string& text) {
  try {
    scenario_from_entries(parse_config(text));
  } catch (const ConfigError& e) {
    return e.key();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

}  // namespace

TEST(FormatDouble, RoundTripAndLocaleFree) {
  for (double v : {0.1, 1.0 / 3.0, -2.5, 1e-300, 6.02214076e23, 0.0}) {
    const std::string s = format_double(v);
    EXPECT_EQ(std::stod(s), v);
    EXPECT_EQ(s.find(','), std::string::npos);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Crc32, KnownVector) {
  EXPECT_EQ(crc32_of(std::string_view("123456789")), 0xCBF43926u);
  EXPECT_EQ(crc32_of(std::string_view("")), 0u);
}

TEST(Files, AtomicWriteAndRead) {
  const fs::path dir = scratch("atomic");
  write_file_atomic(dir / "sub" / "a.txt", std::string_view("hello\n"));
  EXPECT_EQ(read_file_text(dir / "sub" / "a.txt"), "hello\n");
  write_file_atomic(dir / "sub" / "a.txt", std::string_view("bye"));
  EXPECT_EQ(read_file_text(dir / "sub" / "a.txt"), "bye");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "sub")) ++entries;
  EXPECT_EQ(entries, 1u);
  EXPECT_THROW(read_file_bytes(dir / "missing.bin"), std::runtime_error);
}

TEST(Csv, WriteAndRead) {
  CsvWriter w({"strobe", "theta_ave", "label"});
  w.cell(3).cell(0.25).cell(std::string_view("chaotic"));
  w.end_row();
  w.cell(std::uint64_t{4}).cell(-1.5e-9).cell(std::string_view("x"));
  w.end_row();
  EXPECT_EQ(w.str(), "strobe,theta_ave,label\n3,0.25,chaotic\n4,-1.5e-09,x\n");
  const fs::path dir = scratch("csv");
  write_file_atomic(dir / "t.csv", w.str());
  const CsvTable t = read_csv(dir / "t.csv");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.column("theta_ave"), 1u);
  EXPECT_DOUBLE_EQ(t.number(1, "theta_ave"), -1.5e-9);
  EXPECT_THROW(t.column("nope"), std::out_of_range);
}

TEST(StateDump, HeaderLayoutAndRoundTrip) {
  const auto g = make_grid(16, 0.25);
  WaveFunction psi = gaussian_state(g, 0.3, 1.0, 0.2);
  psi.time = 12.5;
  const auto bytes = encode_state(psi);
  ASSERT_EQ(bytes.size(), 40u + 16u * 16u);
  EXPECT_EQ(std::memcmp(bytes.data(), "QTRSTWF1", 8), 0);
  EXPECT_EQ(get_u64(bytes, 8), kDumpVersion);
  EXPECT_EQ(get_u64(bytes, 16), 16u);
  EXPECT_EQ(get_f64(bytes, 24), 0.25);
  EXPECT_EQ(get_f64(bytes, 32), 12.5);
  EXPECT_EQ(get_f64(bytes, 40), psi.amps[0].real());
  EXPECT_EQ(get_f64(bytes, 48), psi.amps[0].imag());
  // little-endian regardless of host order
  EXPECT_EQ(bytes[16], 16u);
  EXPECT_EQ(bytes[17], 0u);

  const WaveFunction back = decode_state(bytes);
  EXPECT_EQ(back.amps, psi.amps);
  EXPECT_EQ(back.time, psi.time);
  EXPECT_EQ(back.grid->size(), 16u);
  EXPECT_EQ(back.grid->kbar(), 0.25);

  auto bad = bytes;
  bad[0] ^= 1;
  EXPECT_THROW(decode_state(bad), IntegrityError);
  EXPECT_THROW(decode_state(std::span(bytes).first(100)), IntegrityError);
}

TEST(WignerDump, Header) {
  const auto g = make_grid(16, 0.25);
  const WignerGrid w = wigner_transform(gaussian_state(g, 0.0, 0.0, 0.2));
  const auto bytes = encode_wigner(w, 0.25, 3.0);
  ASSERT_EQ(bytes.size(), 48u + 8u * 256u);
  EXPECT_EQ(std::memcmp(bytes.data(), "QTRWIGN1", 8), 0);
  EXPECT_EQ(get_u64(bytes, 16), 16u);
  EXPECT_EQ(get_u64(bytes, 24), 16u);
  EXPECT_EQ(get_f64(bytes, 32), 0.25);
  EXPECT_EQ(get_f64(bytes, 40), 3.0);
  EXPECT_EQ(get_f64(bytes, 48 + 8 * 17), w.values[17]);
}

TEST(Config, ParsesMinimalFile) {
  const ScenarioSpec spec = scenario_from_entries(parse_config(kMinimal));
  EXPECT_EQ(spec.kind, ScenarioKind::quantum_ensemble);
  EXPECT_EQ(spec.params.kbar, 0.25);
  EXPECT_EQ(spec.params.grid_size, 256);
  EXPECT_EQ(spec.n_traj, 100);
  EXPECT_EQ(spec.params.seed, 7u);
  EXPECT_TRUE(spec.dumps_at(200));
  EXPECT_FALSE(spec.dumps_at(100));
  EXPECT_NEAR(spec.effective_sigma_p(), 0.04, 1e-4);
}

TEST(Config, CommentsAndWhitespace) {
  const auto entries = parse_config("# header\n  kbar=0.5   # trailing\n\n\txi = 2\r\n");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].first, "kbar");
  EXPECT_EQ(entries[0].second, "0.5");
  EXPECT_EQ(entries[1].second, "2");
}

TEST(Config, ErrorsNameTheKey) {
  const std::string base = kMinimal;
  EXPECT_EQ(expect_config_error(base + "kbra = 0.3\n"), "kbra");
  EXPECT_EQ(expect_config_error(base + "kbar = 0.3\n"), "kbar");
  std::string bad = base;
  bad.replace(bad.find("grid_size = 256"), 15, "grid_size = 100");
  EXPECT_EQ(expect_config_error(bad), "grid_size");
  bad = base;
  bad.replace(bad.find("epsilon = 0.2"), 13, "epsilon = 0.6");
  EXPECT_EQ(expect_config_error(bad), "epsilon");
  bad = base;
  bad.replace(bad.find("D = 0.001"), 9, "D = fast");
  EXPECT_EQ(expect_config_error(bad), "D");
  bad = base;
  bad.replace(bad.find("n_traj = 100"), 12, "n_traj = 0");
  EXPECT_EQ(expect_config_error(bad), "n_traj");
  bad = base;
  bad.replace(bad.find("x0 = 0\n"), 7, "");
  EXPECT_EQ(expect_config_error(bad), "x0");
  bad = base;
  bad.replace(bad.find("scenario = quantum_ensemble"), 27, "scenario = movie");
  EXPECT_EQ(expect_config_error(bad), "scenario");
  EXPECT_EQ(expect_config_error(base + "dump_strobes = 300\n"), "dump_strobes");
  EXPECT_THROW(parse_config("no equals sign\n"), ConfigError);
}

TEST(Config, CanonicalTextRoundTrips) {
  ScenarioSpec spec = scenario_from_entries(parse_config(std::string(kMinimal) + "dump_strobes = 100,200\nlabel = chaotic\n"));
  spec.params.xi = 1.0 / 3.0;
  const std::string text = spec.to_config_text();
  const ScenarioSpec again = scenario_from_entries(parse_config(text));
  EXPECT_EQ(again.to_config_text(), text);
  EXPECT_EQ(again.params.xi, 1.0 / 3.0);
  EXPECT_EQ(again.dump_strobes, (std::vector<int>{100, 200}));
  EXPECT_EQ(again.label, "chaotic");
}

TEST(Config, LoadFromFile) {
  const fs::path dir = scratch("config");
  write_file_atomic(dir / "s.cfg", std::string_view(kMinimal));
  EXPECT_EQ(load_scenario(dir / "s.cfg").n_traj, 100);
  EXPECT_THROW(load_scenario(dir / "missing.cfg"), ConfigError);
}

TEST(Config, PortraitNeedsNoInitialState) {
  const auto spec = scenario_from_entries(parse_config("scenario = portrait\nxi = 1.2\nepsilon = 0.2\n"));
  EXPECT_EQ(spec.kind, ScenarioKind::portrait);
}
