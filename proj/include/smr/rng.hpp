#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace smr {

// One step of splitmix64 (Vigna). Advances `state` and returns the output.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** seeded from four consecutive splitmix64 outputs of the seed.
// This exact construction is the normative PRNG for every documented
// deterministic procedure in this library (corpus splits, shuffles, init).
class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
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

  // Uniform in [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0,bound). bound must be nonzero. Plain modulo: the bias is
  // irrelevant at our scales and the reduction is trivially portable.
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

// Sub-stream seed for a labeled purpose (epoch shuffles, model init) so the
// master seed never feeds two consumers directly.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t x = base ^ (salt * 0x9e3779b97f4a7c15ULL);
  return splitmix64_next(x);
}

// Fisher-Yates, descending index, j = next_u64() mod (i+1). This order and
// reduction are normative: any reimplementation must reproduce the same
// permutation for the same seed.
template <typename T>
void seeded_shuffle(std::vector<T>& values, Xoshiro256ss& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace smr
