#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace seaport {

/// SplitMix64 finaliser (Steele, Lea, Flood). Used for seeding only.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state_);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman, Vigna). Satisfies
/// std::uniform_random_bit_generator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm();
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound), bound > 0 (Lemire's nearly-divisionless
  /// method).
  std::uint64_t below(std::uint64_t bound) noexcept {
    __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<__uint128_t>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Independent random streams within one replication.
enum class Stream : std::uint64_t {
  Arrivals = 1,
  Routing = 2,
  Service = 3,
  BerthChoice = 4,
};

/// Seed for stream `stream` of replication `replication` under master seed
/// `seed`:
///
///   key  = mix(seed + golden * (replication + 1))
///   seed = mix(key ^ (stream * 0xD1B54A32D192ED03))
///
/// where mix is the SplitMix64 finaliser and golden = 0x9E3779B97F4A7C15. The
/// result seeds a Xoshiro256 through SplitMix64 expansion. Results depend
/// only on (seed, replication, stream), never on scheduling order.
constexpr std::uint64_t derive_stream_seed(std::uint64_t seed,
                                           std::uint64_t replication,
                                           Stream stream) noexcept {
  const std::uint64_t key =
      splitmix64_mix(seed + 0x9E3779B97F4A7C15ULL * (replication + 1));
  return splitmix64_mix(key ^ (static_cast<std::uint64_t>(stream) *
                               0xD1B54A32D192ED03ULL));
}

}  // namespace seaport
