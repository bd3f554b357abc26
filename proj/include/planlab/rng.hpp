#pragma once
// Deterministic randomness: a fixed engine wrapper plus hash-derived
// substreams, so parallel rollouts reproduce bit-identically regardless of
// scheduling. Distribution transforms are hand-rolled because the standard
// library leaves std::normal_distribution implementation-defined.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace planlab {

// SplitMix64 finalizer; also used for stable pair hashes.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (mix64(b) + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2)));
}

// Top 53 bits -> [0,1).
inline double bits_to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Independent substream addressed by (master seed, path). Episodes derive
  // their stream from (master, setting index, task index) and so on, which
  // keeps results independent of evaluation order.
  static Rng stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(master ^ 0x5bf03635ul);
    for (std::uint64_t p : path) s = hash_mix(s, p);
    return Rng(s);
  }

  std::uint64_t bits() { return eng_(); }

  double uniform01() { return bits_to_unit(eng_()); }  // [0,1)

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; always consumes exactly two engine draws.
  double normal(double mean = 0.0, double stddev = 1.0) {
    double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    double u2 = bits_to_unit(eng_());
    double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double kTau = 6.283185307179586476925286766559;
    return mean + stddev * r * std::cos(kTau * u2);
  }

  // Uniform integer in [0,n), n >= 1.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(eng_()) * n) >> 64);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace planlab
