#include "niekf/random.hpp"

#include <cmath>
#include <numbers>

namespace niekf {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t index,
                               std::uint64_t lane) const {
  std::uint64_t h = mix(seed_);
  h = mix(h ^ stream);
  h = mix(h ^ index);
  return mix(h ^ lane);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t index, std::uint64_t lane) const {
  // 53 random mantissa bits, offset by half an ulp to exclude 0 and 1.
  return (static_cast<double>(bits(stream, index, lane) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi, std::uint64_t stream, std::uint64_t index,
                           std::uint64_t lane) const {
  return lo + (hi - lo) * uniform(stream, index, lane);
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t index, std::uint64_t lane) const {
  const double u1 = uniform(stream, index, 2 * lane);
  const double u2 = uniform(stream, index, 2 * lane + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace niekf
