//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_RANDOM_H_
#define CHEMGYM_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace chemgym {

// splitmix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

/// Caller-owned random stream.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// implements the distributions itself, so that a given seed produces the
/// same draws on every standard library implementation.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0): engine_(seed) { }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) {
    if (p <= 0.0)
      return false;
    if (p >= 1.0)
      return true;
    return uniform01() < p;
  }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  // Independent child stream; does not advance this stream.
  Rng fork(std::uint64_t stream) const {
    std::mt19937_64 copy = engine_;
    return Rng(mix_seed(copy(), stream));
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace chemgym

#endif  // CHEMGYM_RANDOM_H_
