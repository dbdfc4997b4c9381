#pragma once

#include <cstdint>

namespace kout {

/// Seed coordinates for one Monte Carlo trial. The generator state used for
/// a trial is a pure function of (master_seed, trial_index), so trials can be
/// executed in any order, on any number of workers, with identical results.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

/// 64-bit finalizer used for seed derivation (splitmix64 / Stafford mix13).
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: state advances by the golden-ratio increment
/// 0x9e3779b97f4a7c15 and each output is mix64 of the counter, so output i is
/// a pure function of (seed, i). All bounded sampling is implemented here
/// rather than with std::uniform_int_distribution, whose mapping is
/// implementation-defined; the stream is therefore bit-identical across
/// platforms and standard libraries.
class Splitmix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Splitmix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  constexpr std::uint64_t operator()() noexcept { return next_u64(); }
  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~0ULL; }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). Unbiased via threshold rejection.
  constexpr std::uint64_t uniform_below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

/// Independent sub-streams of a trial. Class assignment and selection
/// sampling draw from separately derived streams so each operation is
/// reproducible on its own.
enum class StreamDomain : std::uint64_t {
  classes = 1,
  selections = 2,
};

/// Derives the generator for (seed, domain) by chaining the mix64 avalanche
/// over master seed, trial index, and domain tag.
inline constexpr Splitmix64 trial_stream(SeedSpec seed, StreamDomain domain) noexcept {
  std::uint64_t h = mix64(seed.master_seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (seed.trial_index + 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ static_cast<std::uint64_t>(domain));
  return Splitmix64(h);
}

}  // namespace kout
