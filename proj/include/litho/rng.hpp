#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace litho {

// splitmix64 step. The generator is pinned here (not std::) so that seeded
// runs are bit-identical across standard libraries and platforms.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64_next(state_); }

  // Uniform integer in [lo, hi], both inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

  // Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller. No cached spare, so the draw count per
  // call is fixed and streams stay reproducible.
  double gaussian() {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::uint64_t state_;
};

// FNV-1a accumulator finalized through splitmix64. Derives per-job seeds
// from (master seed, id strings, indices) so results depend only on the
// job identity, never on execution order.
class SeedMixer {
 public:
  explicit SeedMixer(std::uint64_t seed) { absorb(seed); }

  SeedMixer& absorb(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) absorb_byte(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }
  SeedMixer& absorb(std::string_view s) {
    for (char c : s) absorb_byte(static_cast<std::uint8_t>(c));
    absorb_byte(0xff);  // delimiter so ("ab","c") != ("a","bc")
    return *this;
  }

  std::uint64_t finish() const {
    std::uint64_t s = hash_;
    return splitmix64_next(s);
  }

 private:
  void absorb_byte(std::uint8_t b) {
    hash_ ^= b;
    hash_ *= 0x100000001b3ULL;
  }
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace litho
