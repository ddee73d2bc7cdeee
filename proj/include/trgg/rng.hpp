#pragma once

// Deterministic, splittable pseudo-random streams.
//
// Every sampler in this project draws through Rng so that results are a pure
// function of (parameters, seed) and independent of platform and thread
// count. Parallel experiments give replica k the generator
// Rng::stream(master_seed, k); merging replica results by index then
// reproduces the single-threaded run byte for byte.

#include <array>
#include <cassert>
#include <cstdint>

namespace trgg {

// One splitmix64 step. Used for seeding and for deriving child seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Child seed for stream `index` under `root`. Distinct indices give
// statistically independent streams.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t s = root;
  std::uint64_t a = splitmix64(s);
  s = a ^ (index * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull);
  std::uint64_t b = splitmix64(s);
  return splitmix64(s) ^ (b >> 1);
}

// xoshiro256++ with splitmix64 seeding.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64(sm);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    return Rng(derive_seed(master_seed, stream_index));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), unbiased (multiply-shift with rejection).
  std::uint64_t bounded(std::uint64_t n) {
    assert(n > 0);
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::size_t pick_index(std::size_t n) { return static_cast<std::size_t>(bounded(n)); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace trgg
