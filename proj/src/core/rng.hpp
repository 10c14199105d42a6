#pragma once

#include <cstdint>
#include <vector>

namespace spinhop {

// splitmix64. Small, fast, and identical on every platform, which keeps
// seeded runs reproducible independent of the standard library build.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, n). n must be > 0.
  uint64_t below(uint64_t n) {
    const uint64_t threshold = -n % n;  // 2^64 mod n
    for (;;) {
      const uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  bool coin() { return (next() >> 63) != 0; }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Random 0/1 vector of length n.
  std::vector<uint8_t> bits(size_t n) {
    std::vector<uint8_t> v(n);
    for (auto& b : v) b = coin() ? 1 : 0;
    return v;
  }

  // k distinct indices out of [0, n), in selection order (partial Fisher-Yates).
  std::vector<size_t> sample_without_replacement(size_t n, size_t k) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    for (size_t i = 0; i < k; ++i) {
      const size_t j = i + static_cast<size_t>(below(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

  std::vector<size_t> permutation(size_t n) { return sample_without_replacement(n, n); }

  // Decorrelated child stream, e.g. one per trial.
  Rng split(uint64_t stream) const {
    Rng r(state_ ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
    r.next();
    return r;
  }

 private:
  uint64_t state_;
};

}  // namespace spinhop
