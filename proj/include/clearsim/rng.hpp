#pragma once

#include <cmath>
#include <cstdint>

namespace clearsim {

namespace detail {

// splitmix64 finalizer (Stafford mix13).
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  return mix64(state);
}

}  // namespace detail

// xoshiro256++ with one substream per Monte Carlo cycle index. The four
// state words come from a splitmix64 run started at an avalanche mix of
// (seed, cycle index), so the stream drawn for cycle i depends only on
// (seed, i) and never on thread scheduling.
class CycleRng {
 public:
  static CycleRng substream(std::uint64_t seed, std::uint64_t cycle_index) {
    CycleRng r;
    std::uint64_t sm =
        detail::mix64(seed + (cycle_index + 1) * 0x9E3779B97F4A7C15ULL);
    for (auto& word : r.s_) word = detail::splitmix64_next(sm);
    return r;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // 53-bit uniform strictly inside (0,1).
  double uniform_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Inverse-transform exponential with the given rate; monotone in the
  // underlying uniform and branch-free.
  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4] = {};
};

}  // namespace clearsim
