#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qtraj/wavefunction.hpp"
#include "qtraj/wigner.hpp"

namespace qtraj {

/// Shortest round-trip decimal form ('.' separator, locale independent).
std::string format_double(double v);

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes);
std::uint32_t crc32_of(std::string_view text);

/// Writes `path` via a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);

/// Accumulates a CSV table: header row, '\n' line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> header);
  explicit CsvWriter(const std::vector<std::string>& header);
  CsvWriter& cell(double v);
  CsvWriter& cell(std::int64_t v);
  CsvWriter& cell(std::uint64_t v);
  CsvWriter& cell(int v) { return cell(static_cast<std::int64_t>(v)); }
  CsvWriter& cell(std::string_view v);
  void end_row();
  const std::string& str() const { return text_; }

 private:
  void separator();
  std::string text_;
  bool row_open_ = false;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws std::out_of_range
  double number(std::size_t row, std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Little-endian dump: magic, version, n, kbar, time (8 bytes each), then n
/// interleaved (re, im) doubles.
inline constexpr std::uint64_t kStateDumpMagic = 0x3146575453525451ULL;  // "QTRSTWF1"
inline constexpr std::uint64_t kWignerDumpMagic = 0x314E474957525451ULL;  // "QTRWIGN1"
inline constexpr std::uint64_t kDumpVersion = 1;

std::vector<std::uint8_t> encode_state(const WaveFunction& psi);
/// Rebuilds the state on a fresh grid; throws IntegrityError on a malformed buffer.
WaveFunction decode_state(std::span<const std::uint8_t> bytes);

/// Wigner dump: magic, version, nx, np, kbar, time (8 bytes each), then nx*np doubles row-major.
std::vector<std::uint8_t> encode_wigner(const WignerGrid& w, double kbar, double time);

/// Byte-level helpers for little-endian encoding.
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v);
void put_f64(std::vector<std::uint8_t>& out, double v);
std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t offset);
double get_f64(std::span<const std::uint8_t> in, std::size_t offset);

}  // namespace qtraj
