#pragma once

#include <cstdint>
#include <vector>

namespace har {

// Deterministic 64-bit generator (splitmix64 recurrence).
//
// State update:   s += 0x9E3779B97F4A7C15
// Output mix:     z = s; z = (z ^ (z>>30)) * 0xBF58476D1CE4E5B9;
//                 z = (z ^ (z>>27)) * 0x94D049BB133111EB; return z ^ (z>>31)
//
// The stream is a pure function of the seed, identical on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 bits of mantissa.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform in [0, n) via 128-bit multiply-shift.
  uint64_t below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<__uint128_t>(next_u64()) * n) >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  uint64_t state() const { return state_; }

 private:
  uint64_t state_;
};

}  // namespace har
