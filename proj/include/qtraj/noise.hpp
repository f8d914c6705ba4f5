#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace qtraj {

/// One Ito increment: dW ~ N(0, dt).
struct WienerStep {
  double dW = 0.0;
  double dt = 0.0;
};

/// Seed of substream `stream_id` under `master_seed`.
///
/// Two rounds of the SplitMix64 finalizer over (master, id), so substreams are
/// independent of how many other streams exist or the order they are created.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t stream_id);

/// Seeded Gaussian stream owned by one trajectory.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t master_seed, std::uint64_t stream_id);

  double normal();
  WienerStep wiener(double dt);

  std::uint64_t stream_id() const { return stream_id_; }
  /// Complete generator state as text; restore() reproduces subsequent draws exactly.
  std::string save() const;
  void restore(std::string_view state);

 private:
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace qtraj
