#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace finsler {

// SplitMix64: the output of state += 0x9E3779B97F4A7C15 pushed through two
// xor-multiply mixing rounds. Chosen over std::mt19937 + distributions
// because every draw is specified bit-exactly here, so seeded reports are
// reproducible across standard libraries.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1): 53 high bits scaled
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1]
  double uniform01_pos() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Box-Muller; the sine partner is discarded to keep the stream simple.
  double gaussian() {
    const double u1 = uniform01_pos();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // direction uniform on the unit sphere
  void unit_vector(std::span<double> out) {
    while (true) {
      double s = 0.0;
      for (double& v : out) {
        v = gaussian();
        s += v * v;
      }
      if (s > 1e-12) {
        const double inv = 1.0 / std::sqrt(s);
        for (double& v : out) v *= inv;
        return;
      }
    }
  }
};

// Stable 64-bit FNV-1a, used to derive per-pair sampling streams from the
// global seed so a pair's samples do not depend on which pairs are selected.
inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace finsler
