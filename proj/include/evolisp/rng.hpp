#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace evolisp {

// Deterministic random source. All sampling goes through the helpers below
// rather than <random> distributions, whose output is implementation-defined
// and would break replay of seeded runs across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer on [lo, hi], both ends inclusive. Rejection-sampled.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
    if (span == 0) return static_cast<int64_t>(engine_());  // full 64-bit range
    uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return static_cast<int64_t>(static_cast<uint64_t>(lo) + draw % span);
  }

  // Uniform index on [0, n). n must be positive.
  size_t index(size_t n) {
    return static_cast<size_t>(uniform_int(0, static_cast<int64_t>(n) - 1));
  }

  bool bernoulli(double p) { return next_double() < p; }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[index(items.size())];
  }

  // Fisher-Yates; std::shuffle is implementation-defined.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

  // Derives an independent stream from the original seed and a tag, so fork
  // results do not depend on how many draws happened on the parent.
  Rng fork(uint64_t tag) const { return Rng(mix(seed_ ^ mix(tag))); }

 private:
  // splitmix64 finalizer
  static uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace evolisp
