#pragma once

// Counter-based deterministic RNG.
//
// Every random quantity in the project is a pure function of (seed, stream,
// counter). Parallel code derives one stream per logical work item, so results
// are independent of thread count and scheduling. The mixer is SplitMix64,
// which passes BigCrush as a 64-bit mixer and is more than adequate for
// Monte-Carlo sampling.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace heislab {

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Mix two words into one well-scrambled key.
inline constexpr std::uint64_t mix2(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

}  // namespace detail

class CounterRng {
 public:
  CounterRng() : CounterRng(0, 0) {}
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(detail::mix2(seed, stream)), counter_(0), cached_(false), cache_(0.0) {}

  // Derive an independent stream from this generator's key. Pure: does not
  // advance this generator.
  [[nodiscard]] CounterRng fork(std::uint64_t substream) const {
    CounterRng r;
    r.key_ = detail::mix2(key_, substream);
    return r;
  }

  std::uint64_t next_u64() { return detail::splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform in [0, 1) with 53 random bits.
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; caches the second deviate.
  double next_normal() {
    if (cached_) {
      cached_ = false;
      return cache_;
    }
    double u1 = next_u01();
    double u2 = next_u01();
    // Avoid log(0).
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cache_ = r * std::sin(a);
    cached_ = true;
    return r * std::cos(a);
  }

  bool next_bit() { return (next_u64() >> 63) != 0; }

  // Uniform integer in [0, bound), bound >= 1. Lemire's multiply-shift with
  // rejection: unbiased.
  std::uint64_t next_below(std::uint64_t bound) {
    using u128 = unsigned __int128;
    std::uint64_t x = next_u64();
    u128 m = static_cast<u128>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<u128>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
  bool cached_;
  double cache_;
};

}  // namespace heislab
