#pragma once

#include <cstdint>

namespace niekf {

/// Counter-based random numbers: every draw is a pure function of
/// (seed, stream, index, lane), so any subset of samples can be regenerated
/// independently and in any order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  /// 64 well-mixed bits.
  std::uint64_t bits(std::uint64_t stream, std::uint64_t index, std::uint64_t lane) const;
  /// Uniform in (0, 1).
  double uniform(std::uint64_t stream, std::uint64_t index, std::uint64_t lane) const;
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi, std::uint64_t stream, std::uint64_t index,
                 std::uint64_t lane) const;
  /// Standard normal via Box-Muller over two independent lanes.
  double normal(std::uint64_t stream, std::uint64_t index, std::uint64_t lane) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

/// Stream identifiers for simulated sensors and trial sampling.
enum RngStream : std::uint64_t {
  kStreamRobotImu = 1,
  kStreamGroundImu = 2,
  kStreamEncoders = 3,
  kStreamInitialError = 4,
};

}  // namespace niekf
