#include "statsol/rng.hpp"

#include <cmath>
#include <numbers>

namespace statsol {
namespace {

std::uint64_t mix(std::uint64_t z) {
  // SplitMix64 finalizer.
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t key) : engine_(mix(key)) {}

RandomStream RandomStream::derive(std::uint64_t seed, std::uint64_t a) {
  return RandomStream(mix(seed) ^ mix(a ^ 0x1d8af6a4f06ae1d3ULL));
}

RandomStream RandomStream::derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return RandomStream(mix(mix(seed) ^ mix(a ^ 0x1d8af6a4f06ae1d3ULL)) ^
                      mix(b ^ 0x94ab2f6985cd90f1ULL));
}

double RandomStream::uniform01() {
  // Top 53 bits of the engine output; the raw mt19937_64 sequence is fully
  // specified by the standard, so draws do not depend on libstdc++ details.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

void RandomStream::fill_standard_normal(std::span<double> out) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < out.size(); i += 2) {
    const double u1 = 1.0 - uniform01();  // (0, 1]: keeps the log finite
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    out[i] = radius * std::cos(two_pi * u2);
    if (i + 1 < out.size()) out[i + 1] = radius * std::sin(two_pi * u2);
  }
}

}  // namespace statsol
