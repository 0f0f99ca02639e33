#pragma once

#include <cstdint>

namespace convoy {

// splitmix64, used only to key other generators.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** by Blackman and Vigna (public domain reference code).
// Fixed algorithm so that seeded runs are reproducible across platforms.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next() {
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

  // Uniform in [0,1) with 53 random bits.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Independently keyed stream for one Monte Carlo replicate.  The key mixes
// the root seed with the replicate index, so replicates can run in any
// order (or concurrently) and still produce identical draws.
inline Xoshiro256 replica_stream(std::uint64_t seed, std::uint64_t replica) {
  std::uint64_t k = seed;
  std::uint64_t a = splitmix64(k);
  k = a ^ (0x9e3779b97f4a7c15ULL * (replica + 1));
  return Xoshiro256(splitmix64(k));
}

}  // namespace convoy
