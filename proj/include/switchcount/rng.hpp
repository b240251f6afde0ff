#pragma once

#include <cstdint>
#include <random>

namespace swc {

// splitmix64-counter: output_j = mix64(key + (j+1)*GOLDEN), where key is the
// stream key and mix64 is the splitmix64 finalizer. Counter-based, so stream
// t of seed s is reachable in O(1): key = mix64(s + (t+1)*GOLDEN).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : state_(mix64(seed)) {}

  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix64(seed + (stream + 1) * kGolden)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ull; }

  result_type operator()() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform double in [0,1) with 53 random bits.
  double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound) via 128-bit multiply-shift; the O(bound/2^64)
  // bias is far below every statistical tolerance used here.
  std::uint64_t uniform_below(std::uint64_t bound) {
    return std::uint64_t((static_cast<unsigned __int128>((*this)()) * bound) >> 64);
  }

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  std::uint64_t state_;
};

inline long long poisson_draw(CounterRng& rng, double mean) {
  std::poisson_distribution<long long> d(mean);
  return d(rng);
}

}  // namespace swc
