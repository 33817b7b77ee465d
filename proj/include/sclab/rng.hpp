#pragma once

#include <cstdint>
#include <random>

namespace sclab {

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Child stream seed: stream k of base is mix64(base ^ mix64(k)).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base ^ mix64(stream));
}

// Stream tags used internally so that scenery and walk randomness never share a stream.
enum class Stream : std::uint64_t { scenery = 1, walk = 2, subsample = 3 };

inline std::uint64_t derive_seed(std::uint64_t base, Stream s) {
  return derive_seed(base, static_cast<std::uint64_t>(s));
}

// mt19937_64 has a standard-fixed output sequence; the helpers below avoid
// std distributions, whose algorithms differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform on [0, n), n >= 1, by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace sclab
