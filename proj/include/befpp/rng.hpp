#pragma once

#include <cmath>
#include <cstdint>

namespace befpp {

/// SplitMix64 finalizer; full-avalanche 64-bit mixer.
inline std::uint64_t mix_u64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based uniform generator (a SplitMix64 walk). A stream is
/// identified by (seed, stream_id); the initial counter hashes both, so
/// streams derived from one seed are usable as independent and any
/// (seed, stream_id) pair reproduces the exact same sequence.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : counter_(mix_u64(seed ^ 0x8FB8566EED2D0DA1ULL) ^ mix_u64(~stream_id)),
        seed_(seed),
        stream_(stream_id) {}

  std::uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = counter_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on the open interval (0,1); never 0 or 1, so logs stay finite.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

  /// One standard normal from two uniforms (Box-Muller, cosine branch).
  double next_normal() {
    double u = next_unit();
    double v = next_unit();
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(6.28318530717958647692 * v);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t counter_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// Stream-id layout used throughout: 16-bit suite tag, 32-bit sample index,
/// 16-bit substream (vertex) index. Keeps parallel Monte Carlo reproducible
/// and independent of the worker count.
inline std::uint64_t make_stream_id(std::uint64_t tag, std::uint64_t sample,
                                    std::uint64_t sub) {
  return (tag << 48) | ((sample & 0xFFFFFFFFULL) << 16) | (sub & 0xFFFFULL);
}

namespace stream_tag {
inline constexpr std::uint64_t kBeEnv = 1;
inline constexpr std::uint64_t kDirichletEnv = 2;
inline constexpr std::uint64_t kDistBattery = 3;
inline constexpr std::uint64_t kConvergence = 4;
inline constexpr std::uint64_t kCoupling = 5;
inline constexpr std::uint64_t kLoops = 6;
inline constexpr std::uint64_t kLayeredPrimal = 7;
inline constexpr std::uint64_t kLayeredDual = 8;
inline constexpr std::uint64_t kTest = 9;
}  // namespace stream_tag

}  // namespace befpp
