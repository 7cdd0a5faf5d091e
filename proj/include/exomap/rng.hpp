#pragma once

#include <cmath>
#include <cstdint>

namespace exomap {

/// Deterministic counter-free random generator (splitmix64 core).
///
/// All randomness in the library flows through this type so that seeded runs
/// are bit-identical across executions. No std distributions are used since
/// their output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed), has_spare_(false), spare_(0.0) {}

  /// Derives a decorrelated seed from a base seed and a stream id.
  static std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t nextU64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniformInt(std::uint64_t n) { return nextU64() % n; }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

 private:
  std::uint64_t state_;
  bool has_spare_;
  double spare_;
};

}  // namespace exomap
