#pragma once

#include <cstdint>
#include <limits>

namespace stosa {

/// splitmix64 finalizer; bijective avalanche on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based splittable random stream.
///
/// Output i is mix64(state0 + i * gamma) where both the starting state and the
/// (odd) increment are hashed from (seed, stream_id). Identical (seed,
/// stream_id) reproduce the same sequence; distinct stream ids give
/// statistically independent sequences, so a replicate loop can hand every
/// task its own substream and stay reproducible at any worker count.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
      : seed_(seed), stream_(stream_id) {
    const std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ull);
    state_ = mix64(h ^ mix64(stream_id + 0xD1B54A32D192ED03ull));
    gamma_ = mix64(state_ + 0x9E3779B97F4A7C15ull) | 1ull;
  }

  std::uint64_t next_u64() noexcept {
    state_ += gamma_;
    return mix64(state_);
  }

  result_type operator()() noexcept { return next_u64(); }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double next_double_open0() noexcept { return 1.0 - next_double(); }

  /// Independent stream addressed by (seed, tag). Pure function of the
  /// stream identity, not of the current position.
  RngStream substream(std::uint64_t tag) const noexcept {
    return RngStream(seed_, mix64(stream_ ^ (tag + 0x9E3779B97F4A7C15ull)));
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<std::uint64_t>::max();
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
  std::uint64_t gamma_;
};

/// Deterministic 64-bit seed derived from a root seed and up to two tags.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a,
                                 std::uint64_t b = 0) noexcept {
  return mix64(mix64(root + 0x9E3779B97F4A7C15ull) ^
               mix64(a + 0xD1B54A32D192ED03ull) ^
               mix64(b + 0x8CB92BA72F3D8DD7ull));
}

}  // namespace stosa
