#pragma once

#include <cstdint>
#include <random>

namespace rachsim {

// Deterministic random stream. Every helper consumes a fixed number of raw
// draws so that traces are reproducible bit-for-bit across platforms
// (std::uniform_*_distribution makes no such guarantee).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform double in [0, 1), 53 bits, one draw.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n), one draw. Modulo bias is below 2^-57 for the
  // pool sizes used here (n <= 64) and irrelevant for traffic windows.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

 private:
  std::mt19937_64 gen_;
};

// splitmix64 finalizer, used to derive independent sub-seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Sub-seed for (grid point, repetition) in a batch; stable regardless of
// execution order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point, std::uint64_t rep) {
  return mix64(mix64(base ^ mix64(point + 1)) ^ mix64(rep + 0x517cc1b727220a95ULL));
}

}  // namespace rachsim
