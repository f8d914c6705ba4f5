#include "qtraj/io.hpp"

#include <zlib.h>

#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "qtraj/errors.hpp"

namespace qtraj {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t done = 0;
  while (done < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - done, 1u << 30));
    crc = crc32(crc, bytes.data() + done, chunk);
    done += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::uint32_t crc32_of(std::string_view text) {
  return crc32_of(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvWriter::CsvWriter(std::initializer_list<std::string_view> header) {
  for (auto h : header) cell(h);
  end_row();
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) {
  for (const auto& h : header) cell(std::string_view(h));
  end_row();
}

void CsvWriter::separator() {
  if (row_open_) text_ += ',';
  row_open_ = true;
}

CsvWriter& CsvWriter::cell(double v) {
  separator();
  text_ += format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t v) {
  separator();
  text_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::uint64_t v) {
  separator();
  text_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view v) {
  separator();
  text_ += v;
  return *this;
}

void CsvWriter::end_row() {
  text_ += '\n';
  row_open_ = false;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("missing column " + std::string(name));
}

double CsvTable::number(std::size_t row, std::string_view name) const {
  const auto& s = rows.at(row).at(column(name));
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw std::runtime_error("not a number: " + s);
  return v;
}

CsvTable read_csv(const std::filesystem::path& path) {
  const std::string text = read_file_text(path);
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t offset) {
  if (offset + 8 > in.size()) throw IntegrityError("truncated buffer");
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(in[offset + b]) << (8 * b);
  return v;
}

double get_f64(std::span<const std::uint8_t> in, std::size_t offset) {
  return std::bit_cast<double>(get_u64(in, offset));
}

std::vector<std::uint8_t> encode_state(const WaveFunction& psi) {
  std::vector<std::uint8_t> out;
  out.reserve(40 + 16 * psi.size());
  put_u64(out, kStateDumpMagic);
  put_u64(out, kDumpVersion);
  put_u64(out, psi.size());
  put_f64(out, psi.grid->kbar());
  put_f64(out, psi.time);
  for (const auto& a : psi.amps) {
    put_f64(out, a.real());
    put_f64(out, a.imag());
  }
  return out;
}

WaveFunction decode_state(std::span<const std::uint8_t> bytes) {
  if (get_u64(bytes, 0) != kStateDumpMagic) throw IntegrityError("not a state dump");
  if (get_u64(bytes, 8) != kDumpVersion) throw IntegrityError("unsupported state dump version");
  const std::uint64_t n = get_u64(bytes, 16);
  const double kbar = get_f64(bytes, 24);
  const double time = get_f64(bytes, 32);
  if (bytes.size() != 40 + 16 * n) throw IntegrityError("state dump length does not match header");
  WaveFunction psi(make_grid(n, kbar), time);
  for (std::size_t j = 0; j < n; ++j) {
    psi.amps[j] = {get_f64(bytes, 40 + 16 * j), get_f64(bytes, 48 + 16 * j)};
  }
  return psi;
}

std::vector<std::uint8_t> encode_wigner(const WignerGrid& w, double kbar, double time) {
  std::vector<std::uint8_t> out;
  out.reserve(48 + 8 * w.values.size());
  put_u64(out, kWignerDumpMagic);
  put_u64(out, kDumpVersion);
  put_u64(out, w.nx);
  put_u64(out, w.np);
  put_f64(out, kbar);
  put_f64(out, time);
  for (double v : w.values) put_f64(out, v);
  return out;
}

}  // namespace qtraj
