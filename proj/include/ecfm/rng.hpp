#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ecfm::rng {

// All randomness in the project flows through these helpers. std::mt19937_64
// has a fully specified output sequence; the distributions below avoid
// std::uniform_*_distribution, whose results are implementation-defined.
using Engine = std::mt19937_64;

inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = eng();
    if (x >= threshold) return x % n;
  }
}

inline bool bernoulli(Engine& eng, double p) { return uniform01(eng) < p; }

template <typename T>
void shuffle(std::vector<T>& v, Engine& eng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = uniform_below(eng, i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace ecfm::rng
