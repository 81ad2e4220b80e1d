#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace nidsbench {

/// Seeded generator with platform-independent draws (the std distributions
/// are implementation-defined, mt19937_64 itself is not).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Knuth's multiplication method, capped at `cap`.
  unsigned poisson(double lambda, unsigned cap) {
    const double limit = std::exp(-lambda);
    double p = 1.0;
    unsigned k = 0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit && k <= cap);
    return std::min(k - 1, cap);
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
  }

private:
  std::mt19937_64 engine_;
};

} // namespace nidsbench
