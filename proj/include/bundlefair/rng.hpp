#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace bundlefair {

// Deterministic random source. std::mt19937_64 is bit-exact across
// implementations, and all derived draws below avoid std::*_distribution
// (whose outputs are implementation-defined), so fixtures generated with a
// given seed are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent per-stream generator (e.g. one per user), so results do not
  // depend on the order streams are consumed in.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull)));
  }

  std::uint64_t next() { return engine_(); }

  // Unbiased integer in [0, n) via rejection sampling.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t limit = ~0ull - (~0ull % n);
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Fisher-Yates shuffle on top of bounded().
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[bounded(i)]);
    }
  }

 private:
  // splitmix64 finalizer, used only for seed derivation.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace bundlefair
