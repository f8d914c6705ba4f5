#include "qtraj/noise.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtraj {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t stream_id) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL));
}

NoiseStream::NoiseStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : stream_id_(stream_id), engine_(substream_seed(master_seed, stream_id)) {}

double NoiseStream::normal() { return normal_(engine_); }

WienerStep NoiseStream::wiener(double dt) { return {std::sqrt(dt) * normal(), dt}; }

std::string NoiseStream::save() const {
  std::ostringstream os;
  os << stream_id_ << ' ' << engine_ << ' ' << normal_;
  return os.str();
}

void NoiseStream::restore(std::string_view state) {
  std::istringstream is{std::string(state)};
  std::uint64_t id = 0;
  is >> id >> engine_ >> normal_;
  if (!is || id != stream_id_) throw std::invalid_argument("noise stream state does not match this stream");
}

}  // namespace qtraj
