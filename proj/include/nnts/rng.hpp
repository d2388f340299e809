#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace nnts {

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for replicate `stream` of a run started from `base_seed`. The value
// depends only on the pair, so results do not depend on how replicates are
// scheduled across workers.
constexpr std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t stream) noexcept {
  return mix64(mix64(base_seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

// Portable generator: std::mt19937_64 is fully specified by the standard, but
// the std:: distributions are not, so the variates are produced here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}
  Rng(std::uint64_t base_seed, std::uint64_t stream) : engine_(stream_seed(base_seed, stream)) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform angle on [0, 2pi).
  double angle() {
    double a = 2.0 * std::numbers::pi * uniform();
    return a < 2.0 * std::numbers::pi ? a : 0.0;
  }

  // Standard normal (Box-Muller, one variate cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nnts
