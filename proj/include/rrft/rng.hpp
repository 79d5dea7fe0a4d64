#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "rrft/error.hpp"

namespace rrft {

// All randomness in the library flows through this wrapper. The mt19937_64
// engine is fully specified by the standard; the samplers below are written
// out by hand because the std distributions are implementation-defined and
// reports must be byte-identical for a given seed on any toolchain.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased integer in [0, bound) via rejection sampling.
  std::uint64_t bounded(std::uint64_t bound) {
    require_input(bound > 0, "rng bound must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    require_input(lo <= hi, "uniform_int range is empty");
    return lo + static_cast<int>(bounded(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  double uniform_real(double lo, double hi) {
    require_input(lo <= hi, "uniform_real range is empty");
    return lo + unit() * (hi - lo);
  }

  double exponential(double rate) {
    require_input(rate > 0.0, "exponential rate must be positive");
    return -std::log1p(-unit()) / rate;
  }

  bool bernoulli(double p) { return unit() < p; }

private:
  std::mt19937_64 engine_;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}
}  // namespace detail

// Derives an independent, reproducible substream seed from a master seed,
// a stream tag and an index (per-app, per-figure, per-strategy, ...).
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view tag,
                                    std::uint64_t index = 0) {
  std::uint64_t h = detail::splitmix64(master ^ detail::fnv1a(tag));
  return detail::splitmix64(h ^ detail::splitmix64(index));
}

}  // namespace rrft
