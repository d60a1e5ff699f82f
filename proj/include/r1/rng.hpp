#pragma once

#include <cstdint>
#include <initializer_list>

namespace r1 {

// Counter-derived substream PRNG (splitmix64 seeding, xoshiro256** core).
// Substreams are pure functions of (master seed, path), so any trial can be
// regenerated in isolation; this is what makes parallel runs and resume
// byte-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  // Derives an independent stream from a master seed and a path of indices,
  // e.g. {kN, n_idx, retry} or {kG, n_idx, c_idx, a_idx, g_idx}.
  static Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = master ^ 0x6a09e667f3bcc909ull;
    for (std::uint64_t e : path) {
      h += 0x9e3779b97f4a7c15ull;
      h = mix(h ^ mix(e + 0x1f83d9abfb41bd6bull));
    }
    return Rng(h);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer on [lo, hi] inclusive, unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    return mix(x);
  }

  std::uint64_t state_[4];
};

// Path tags keeping substream families disjoint across the pipelines.
namespace stream {
inline constexpr std::uint64_t kDirections = 1;
inline constexpr std::uint64_t kPhases = 2;
inline constexpr std::uint64_t kAmplitudes = 3;
inline constexpr std::uint64_t kG = 4;
inline constexpr std::uint64_t kSurvey = 5;
inline constexpr std::uint64_t kLaminateNet = 6;
inline constexpr std::uint64_t kSpec = 7;
}  // namespace stream

}  // namespace r1
