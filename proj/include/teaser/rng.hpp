#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace teaser {

// Deterministic splitmix64 generator. The <random> engines leave the
// distribution output implementation-defined, which breaks byte-identical
// reruns across toolchains, so every randomized step draws from this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // [0, n)
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  // [0, 1) with 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    // Box-Muller; u clamped away from 0 so the log stays finite
    double u = uniform();
    double v = uniform();
    if (u < 1e-300) u = 1e-300;
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * v);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  // Decorrelated child stream, e.g. one per snapshot level.
  Rng fork(std::uint64_t stream) const {
    Rng child(state_ ^ (0x94d049bb133111ebull * (stream + 1)));
    child.next_u64();
    return child;
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::uint64_t state_;
};

}  // namespace teaser
