#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace statsol {

/// Deterministic random stream. Stream keys are derived from (seed, index)
/// tuples with a SplitMix64 finalizer so that independently keyed streams can
/// be consumed in any scheduling order without changing results. Sampling is
/// reproducible for a fixed key within one build of the library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key);

  /// Stream for e.g. ensemble member `a` under master `seed`.
  static RandomStream derive(std::uint64_t seed, std::uint64_t a);
  /// Stream for e.g. (member, realization) pair (a, b) under master `seed`.
  static RandomStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

  /// Uniform draw in [0, 1), 53-bit resolution.
  double uniform01();

  /// Uniform draw in [lo, hi).
  double uniform(double lo, double hi);

  /// Fills `out` with independent standard normals via Box-Muller. Pairs
  /// (z0, z1) are emitted in draw order; for odd lengths the trailing sine
  /// variate of the last pair is discarded.
  void fill_standard_normal(std::span<double> out);

 private:
  std::mt19937_64 engine_;
};

}  // namespace statsol
