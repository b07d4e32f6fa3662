#pragma once

#include <cstdint>
#include <random>

namespace lsim {

// Stateless 64-bit mixer (SplitMix64 finalizer). Used for seed-derived
// per-flow values so they do not depend on call order.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seeded generator with a portable unit-interval draw. std::mt19937_64 output
// is fully specified by the standard; the distributions are not, so the
// conversion to double is done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, 1).
  double NextUnit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lsim
