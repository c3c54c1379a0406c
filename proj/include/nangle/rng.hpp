#pragma once

#include <cstdint>

namespace nangle {

/// splitmix64 step; the backbone of the seed-derivation discipline.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Derives an independent child seed from (master, stream, index). Every
/// trial in the harness gets its own derived seed, so single trials can be
/// replayed no matter how the surrounding run is scheduled.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= 0x632be59bd9b4e019ull * (stream + 1);
  std::uint64_t b = splitmix64(s);
  s ^= 0x9e6c63d0876a9a47ull * (index + 1);
  std::uint64_t c = splitmix64(s);
  return a ^ (b + 0x517cc1b727220a95ull) ^ (c << 1);
}

/// Small deterministic generator (xorshift-star over a splitmix-seeded
/// state). Not crypto, just reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // Warm up so that small seeds do not produce correlated leading draws.
    splitmix64(state_);
    splitmix64(state_);
  }

  std::uint64_t next() { return splitmix64(state_); }

  /// Uniform value in [0, bound); bound = 0 returns 0.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return 0;
    return next() % bound;
  }

  /// Uniform value in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  Rng split() { return Rng(next()); }

 private:
  std::uint64_t state_;
};

}  // namespace nangle
